//! Asymptotic equivalence of left-infinite words and the tile graphs that
//! approximate the limit space.

use selfsim::abelian::abelian_asymptotic_eq;
use selfsim::catalog;
use selfsim::contraction::{asymptotically_equivalent, nucleus, tile_graph};
use selfsim::words::{Alphabet, LeftWord};

fn main() -> selfsim::Result<()> {
    let bin = Alphabet::new(2)?;
    let adding = catalog::group("adding_machine")?;
    let na = nucleus(&adding, 100)?;
    let dyadic = catalog::dyadic();
    for (u, v) in [("(0)1", "(1)0"), ("(0)11", "(1)00"), ("(01)", "(10)"), ("(0)", "(1)")] {
        let (u, v) = (LeftWord::parse(&bin, u)?, LeftWord::parse(&bin, v)?);
        println!(
            "{} ~ {}: nucleus {}, series {}",
            u.render(&bin),
            v.render(&bin),
            asymptotically_equivalent(&na, &u, &v)?,
            abelian_asymptotic_eq(&dyadic, &u, &v)?
        );
    }

    let g = catalog::group("grigorchuk")?;
    let ng = nucleus(&g, 100)?;
    for level in 1..=4 {
        let t = tile_graph(&g, &ng, level, 1 << 10)?.simplicial();
        println!("grigorchuk tiles at level {level}: {} edges, path: {}", t.num_edges(), t.is_path());
    }
    let gasket = catalog::group("sierpinski_gasket")?;
    let ns = nucleus(&gasket, 100)?;
    print!("{}", tile_graph(&gasket, &ns, 2, 1 << 10)?.to_dot(true));
    Ok(())
}

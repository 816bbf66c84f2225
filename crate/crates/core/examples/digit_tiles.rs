//! Digit systems: the automaton of a translation, the finite-state test and
//! the attractor raster.  Pass a path to also write the dragon as PGM.

use selfsim::abelian::{ascii_art, digit_automaton, is_finite_state, render_tile, RationalMatrix, TileImage};
use selfsim::catalog;

fn main() -> selfsim::Result<()> {
    let dragon = catalog::dragon();
    println!("finite state: {}", is_finite_state(dragon.matrix())?);
    for g in [[1, 0], [0, 1], [3, -2]] {
        let da = digit_automaton(&dragon, &g, 64)?;
        println!("automaton of {g:?}: {} states", da.states.len());
    }

    let rows = vec![vec!["2".to_string(), "1".into()], vec!["0".into(), "1/3".into()]];
    println!("[[2,1],[0,1/3]] finite state: {}", is_finite_state(&RationalMatrix::parse(&rows)?)?);

    if let TileImage::Interval(lo, hi) = render_tile(&catalog::dyadic(), 8, 64)? {
        println!("dyadic tile after 8 digits: [{lo}, {hi}]");
    }
    if let TileImage::Raster(r) = render_tile(&dragon, 12, 256)? {
        println!("dragon: {} filled pixels of {}", r.filled(), r.resolution * r.resolution);
        print!("{}", ascii_art(&r, 64));
        if let Some(path) = std::env::args().nth(1) {
            std::fs::write(&path, r.to_pgm())?;
            println!("wrote {path}");
        }
    }
    Ok(())
}

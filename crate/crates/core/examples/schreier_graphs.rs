//! Level and orbit Schreier graphs, with their shapes and growth.

use selfsim::catalog;
use selfsim::schreier::{ball_growth, generator_set, level_schreier, orbit_ball};
use selfsim::words::{Alphabet, OmegaWord};

fn main() -> selfsim::Result<()> {
    let g = catalog::group("grigorchuk")?;
    let gens = generator_set(&g, None)?;
    for n in 1..=6 {
        let s = level_schreier(&g, &gens, n, 1 << 12)?.simplicial();
        println!("grigorchuk level {n}: {} vertices, path: {}", s.num_vertices(), s.is_path());
    }
    print!("{}", level_schreier(&g, &gens, 3, 1 << 12)?.to_dot(true));

    let img = catalog::group("img_z2_minus_1")?;
    let gens = generator_set(&img, None)?;
    let ball = orbit_ball(&img, &gens, &OmegaWord::constant(1), 32)?;
    let sizes = ball_growth(&ball, 0, 32)?;
    for n in 0..=5 {
        println!("|B((1), {})| = {}", 1 << n, sizes[1 << n]);
    }

    let a = Alphabet::new(3)?;
    let fg = catalog::group("fabrykowski_gupta")?;
    let gens = generator_set(&fg, None)?;
    let s = level_schreier(&fg, &gens, 3, 1 << 12)?.simplicial();
    let cycles = s.core_cycle_lengths();
    println!("fabrykowski_gupta level 3 over {{{}}}: {} edges, cycle lengths {cycles:?}", a.render(&[0, 1, 2]), s.num_edges());
    Ok(())
}

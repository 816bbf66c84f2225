//! Orders of level quotients by Schreier-Sims, and the Hausdorff dimension
//! estimates they give.

use selfsim::catalog;

fn main() -> selfsim::Result<()> {
    for name in ["grigorchuk", "fabrykowski_gupta", "adding_machine", "img_z2_minus_1"] {
        let g = catalog::group(name)?;
        println!("{name}");
        for n in 1..=6 {
            let order = g.level_quotient_order(n, 1 << 12)?;
            let h = g.hausdorff_estimate(n, 1 << 12)?;
            println!("  level {n}: |G/St(n)| = {order}, dimension estimate {h} ({:.4})", h.to_f64());
        }
    }
    Ok(())
}

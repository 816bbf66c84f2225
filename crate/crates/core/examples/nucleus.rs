//! Nuclei of contracting groups, and the cap-limited search on a group that
//! is not contracting.

use selfsim::catalog;
use selfsim::contraction::{contraction_estimate, is_contracting, open_set_condition, Contracting};

fn main() -> selfsim::Result<()> {
    for name in ["adding_machine", "grigorchuk", "fabrykowski_gupta", "sierpinski_gasket", "img_z2_minus_1", "lamplighter"] {
        let g = catalog::group(name)?;
        match is_contracting(&g, 200)? {
            Contracting::Yes(n) => {
                let rho = contraction_estimate(&g, 20, 8, 256, 1, 1 << 16)?;
                println!(
                    "{name}: nucleus {:?}, open set condition {}, rho ~ {rho:.3}",
                    n.names(),
                    open_set_condition(&n)
                );
            }
            Contracting::Inconclusive { cap } => println!("{name}: no nucleus within {cap} elements"),
        }
    }

    let g = catalog::group("grigorchuk")?;
    if let Contracting::Yes(n) = is_contracting(&g, 200)? {
        print!("{}", n.to_dsl("grigorchuk"));
    }
    Ok(())
}

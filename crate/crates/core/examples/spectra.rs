//! Spectra of Schreier graphs: Jacobi eigenvalues against closed forms and
//! determinant recursions.

use selfsim::catalog;
use selfsim::schreier::generator_set;
use selfsim::spectra::{eigenvalues_sym, fg_detq_check, fg_spectrum_closed, hecke_matrix, img_phi_recursion_check};

fn main() -> selfsim::Result<()> {
    let fg = catalog::group("fabrykowski_gupta")?;
    let gens = generator_set(&fg, None)?;
    for n in 1..=4 {
        let spec = eigenvalues_sym(&hecke_matrix(&fg, &gens, n, false, 1 << 12)?, 1e-10)?;
        let closed = fg_spectrum_closed(n);
        let err = spec.values.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("level {n}: {} distinct eigenvalues, max deviation from the closed form {err:.1e}", spec.values.len());
    }

    let g = catalog::group("grigorchuk")?;
    let gens = generator_set(&g, None)?;
    let mut prev = None;
    for n in 1..=6 {
        let spec = eigenvalues_sym(&hecke_matrix(&g, &gens, n, true, 1 << 12)?, 1e-10)?;
        let nested = prev.as_ref().map(|p: &selfsim::spectra::Spectrum| p.embeds_in(&spec, 1e-8));
        println!("grigorchuk level {n}: {:?} nested: {nested:?}", spec.values.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
        prev = Some(spec);
    }

    for n in 2..=4 {
        let c = fg_detq_check(n, 10, 7, 1e-8)?;
        println!("det Q_{n}: passed {} (worst {:.1e})", c.passed, c.worst().map_or(0.0, |s| s.relative_error));
    }
    for k in 1..=4 {
        let c = img_phi_recursion_check(k, 10, 7, 1e-8)?;
        println!("Phi_{k}: passed {} (worst {:.1e})", c.passed, c.worst().map_or(0.0, |s| s.relative_error));
    }
    Ok(())
}

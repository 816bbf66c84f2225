//! Rule-table maps on subshifts: Fibonacci numeration, Penrose involutions
//! and the Apollonian inversions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selfsim::invsemi::{
    fibonacci_successor, involution_check, penrose_table, symmetric_code, Apollonian, OmegaTransform, SymmetricCode,
    ZeckendorfCodec,
};

fn main() -> selfsim::Result<()> {
    let codec = ZeckendorfCodec::new(12)?;
    for m in [0, 1, 4, 7, 12, 20] {
        let w = codec.encode(m)?;
        let digits: String = w.iter().map(|x| char::from(b'0' + x)).collect();
        println!("{m:>3} = {digits} -> {}", fibonacci_successor(m, 12)?);
    }

    let penrose = penrose_table();
    print!("{}", penrose.dump());
    for map in ["L", "M", "S"] {
        println!("{map} involution to depth 8: {}", involution_check(&penrose, map, 8)?);
    }
    let abc = penrose.alphabet().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in [SymmetricCode::M, SymmetricCode::L, SymmetricCode::S] {
        let w = symmetric_code(kind, 3, 2, &mut rng);
        let map = format!("{kind:?}");
        let img = penrose.apply(&map, &w)?;
        println!("{map}({}) = {}", abc.render_omega(&w), abc.render_omega(&img));
    }

    let ap = Apollonian::new();
    let digits = ap.alphabet().clone();
    let w = digits.parse_omega("21(34)")?;
    for i in 0..4 {
        println!("g{}({}) = {}", i + 1, digits.render_omega(&w), digits.render_omega(&ap.apply_gamma(i, &w)?));
    }
    Ok(())
}

//! One PASS/FAIL line per acceptance criterion, with wall-clock times.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfsim::abelian::{abelian_asymptotic_eq, digit_automaton, is_finite_state, RationalMatrix};
use selfsim::catalog;
use selfsim::contraction::{asymptotically_equivalent, nucleus, tile_graph};
use selfsim::group::{Element, Group, GroupDef, Hausdorff, Order};
use selfsim::invsemi::{fibonacci_successor, involution_check, penrose_table};
use selfsim::schreier::{generator_set, level_schreier, orbit_ball, SimplicialGraph};
use selfsim::spectra::{eigenvalues_sym, fg_detq_check, fg_spectrum_closed, hecke_matrix, img_phi_recursion_check};
use selfsim::words::{index_to_word, Alphabet, LeftWord, OmegaWord};
use selfsim::Error;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const MAX: usize = 1 << 20;

fn group(name: &str) -> Group {
    catalog::group(name).unwrap()
}

fn names_sorted(g: &Group, elements: &[Element]) -> Vec<String> {
    let mut v: Vec<String> = elements.iter().map(|e| g.render(e)).collect();
    v.sort();
    v
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> std::result::Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, format!("{what} took {e:?}, limit {limit:?}"))
}

fn c1() -> Outcome {
    let t = Instant::now();
    let g = group("grigorchuk");
    let n = nucleus(&g, 1000).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(5), "nucleus")?;
    let got = names_sorted(&g, n.elements());
    let want: Vec<Element> = ["1", "a", "b", "c", "d"].iter().map(|w| g.parse_element(w).unwrap()).collect();
    ensure(n.len() == 5, format!("nucleus {got:?}"))?;
    ensure(want.iter().all(|e| n.contains(&g, e)), format!("nucleus {got:?}"))?;
    Ok(format!("{got:?}"))
}

fn c2() -> Outcome {
    let g = group("adding_machine");
    let n = nucleus(&g, 1000).map_err(|e| e.to_string())?;
    let want: Vec<Element> = ["a'", "1", "a"].iter().map(|w| g.parse_element(w).unwrap()).collect();
    ensure(n.len() == 3 && want.iter().all(|e| n.contains(&g, e)), format!("{:?}", n.names()))?;
    Ok(format!("{:?}", names_sorted(&g, n.elements())))
}

fn c3() -> Outcome {
    match nucleus(&group("lamplighter"), 50) {
        Err(Error::Exceeded { cap }) => Ok(format!("Exceeded {{ cap: {cap} }}")),
        Err(e) => Err(format!("unexpected error {e}")),
        Ok(n) => Err(format!("nucleus of size {} found", n.len())),
    }
}

fn c4() -> Outcome {
    let g = group("grigorchuk");
    let sub: Vec<(usize, Element)> = [("a", "aca"), ("c", "cd"), ("d", "c")]
        .iter()
        .map(|(x, w)| (g.def().generator_index(x).unwrap(), g.parse_element(w).unwrap()))
        .collect();
    let sigma = |e: &Element| {
        Element::from_word(e.word().iter().flat_map(|s| {
            let img = sub.iter().find(|(i, _)| *i == s.index).map(|(_, w)| w.clone()).unwrap_or(Element::generator(s.index));
            if s.inverse {
                img.inverse().word().to_vec()
            } else {
                img.word().to_vec()
            }
        }))
    };
    let mut slowest = Duration::ZERO;
    let mut calls = 0;
    for r in ["a^2", "(ad)^4", "(adacac)^4"] {
        let mut w = g.parse_element(r).unwrap();
        for i in 0..=3 {
            let t = Instant::now();
            let trivial = g.is_trivial(&w);
            slowest = slowest.max(t.elapsed());
            calls += 1;
            ensure(trivial, format!("sigma^{i}({r}) is not trivial"))?;
            w = sigma(&w);
        }
    }
    ensure(slowest < Duration::from_secs(1), format!("slowest word problem {slowest:?}"))?;
    Ok(format!("{calls} word problems, slowest {slowest:?}"))
}

fn c5() -> Outcome {
    let t = Instant::now();
    let g = group("grigorchuk");
    for n in 3..=7u32 {
        let exp = 5 * 2u64.pow(n) / 8 + 2;
        let got = g.level_quotient_order(n as usize, MAX).map_err(|e| e.to_string())?;
        ensure(got == BigUint::one() << exp, format!("level {n}: {got} vs 2^{exp}"))?;
    }
    within(t, Duration::from_secs(30), "Schreier-Sims")?;
    Ok("2^7, 2^12, 2^22, 2^42, 2^82".into())
}

fn c6() -> Outcome {
    let g = group("grigorchuk");
    let mut prev: Option<BigRational> = None;
    let limit = BigRational::new(5.into(), 8.into());
    for n in 4..=7u32 {
        let want = BigRational::new((5 * 2i64.pow(n) / 8 + 2).into(), (2i64.pow(n) - 1).into());
        let got = match g.hausdorff_estimate(n as usize, MAX).map_err(|e| e.to_string())? {
            Hausdorff::Exact(q) => q,
            other => return Err(format!("level {n}: non-exact value {other}")),
        };
        ensure(got == want, format!("level {n}: {got} vs {want}"))?;
        ensure(got > limit, format!("level {n}: {got} not above 5/8"))?;
        if let Some(p) = &prev {
            ensure(&got < p, format!("level {n}: {got} not below {p}"))?;
        }
        prev = Some(got);
    }
    Ok(format!("down to {}", prev.unwrap()))
}

fn c7() -> Outcome {
    let g = group("grigorchuk");
    let gens = generator_set(&g, None).unwrap();
    for n in 1..=6 {
        let s = level_schreier(&g, &gens, n, MAX).map_err(|e| e.to_string())?.simplicial();
        ensure(s.num_vertices() == 1 << n && s.is_path(), format!("level {n} is not a path on 2^{n} vertices"))?;
    }
    Ok("paths for n = 1..6".into())
}

fn c8() -> Outcome {
    let t = Instant::now();
    let g = group("fabrykowski_gupta");
    let gens = generator_set(&g, None).unwrap();
    for n in 2..=4 {
        let m = hecke_matrix(&g, &gens, n, false, MAX).map_err(|e| e.to_string())?;
        let spec = eigenvalues_sym(&m, 1e-10).map_err(|e| e.to_string())?;
        let closed = fg_spectrum_closed(n);
        ensure(
            spec.values.len() == closed.len() && spec.values.iter().zip(&closed).all(|(a, b)| (a - b).abs() < 1e-9),
            format!("level {n}: {:?} vs {closed:?}", spec.values),
        )?;
    }
    within(t, Duration::from_secs(10), "FG spectra")?;
    Ok("levels 2, 3, 4".into())
}

fn c9() -> Outcome {
    let mut worst = 0f64;
    for n in 2..=4 {
        let c = fg_detq_check(n, 10, 0, 1e-8).map_err(|e| e.to_string())?;
        ensure(c.samples.len() == 30, format!("level {n}: {} samples", c.samples.len()))?;
        let w = c.worst().unwrap();
        ensure(c.passed, format!("level {n}: worst {:?}", w))?;
        worst = worst.max(w.relative_error);
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

fn c10() -> Outcome {
    let mut worst = 0f64;
    for k in 1..=4 {
        let c = img_phi_recursion_check(k, 10, 0, 1e-8).map_err(|e| e.to_string())?;
        let w = c.worst().unwrap();
        ensure(c.passed, format!("k = {k}: counterexample {:?}", w))?;
        worst = worst.max(w.relative_error);
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

fn c11() -> Outcome {
    for name in ["adding_machine", "grigorchuk", "fabrykowski_gupta"] {
        let g = group(name);
        let gens = generator_set(&g, None).unwrap();
        let spec = |n| eigenvalues_sym(&hecke_matrix(&g, &gens, n, true, MAX).unwrap(), 1e-10).unwrap();
        let mut prev = spec(1);
        for n in 1..=4 {
            let next = spec(n + 1);
            ensure(prev.embeds_in(&next, 1e-8), format!("{name}: level {n} does not embed in {}", n + 1))?;
            prev = next;
        }
    }
    Ok("three groups, n = 1..4".into())
}

fn random_left(rng: &mut ChaCha8Rng) -> LeftWord {
    let tail = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..2u8)).collect();
    let suffix = (0..rng.gen_range(0..=6)).map(|_| rng.gen_range(0..2u8)).collect();
    LeftWord::new(tail, suffix).unwrap()
}

fn c12() -> Outcome {
    let bin = Alphabet::new(2).unwrap();
    let adding = group("adding_machine");
    let grig = group("grigorchuk");
    let na = nucleus(&adding, 1000).unwrap();
    let ng = nucleus(&grig, 1000).unwrap();
    let w = |s: &str| LeftWord::parse(&bin, s).unwrap();
    ensure(asymptotically_equivalent(&na, &w("(0)1"), &w("(1)0")).unwrap(), "adding machine glue pair")?;
    ensure(asymptotically_equivalent(&ng, &w("(1)01"), &w("(1)00")).unwrap(), "grigorchuk glue pair")?;
    for tail in ["", "0", "1", "0110"] {
        let (u, v) = (w(&format!("(0)1{tail}")), w(&format!("(1)0{tail}")));
        ensure(asymptotically_equivalent(&na, &u, &v).unwrap(), format!("adding machine with suffix {tail}"))?;
    }
    let ds = catalog::dyadic();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut non, mut queries) = (0, 0);
    while non < 100 {
        let (u, v) = (random_left(&mut rng), random_left(&mut rng));
        let series = abelian_asymptotic_eq(&ds, &u, &v).unwrap();
        let nuc = asymptotically_equivalent(&na, &u, &v).unwrap();
        queries += 1;
        ensure(series == nuc, format!("{} vs {}: series {series}, nucleus {nuc}", u.render(&bin), v.render(&bin)))?;
        if !series {
            non += 1;
        }
    }
    Ok(format!("{queries} random queries, {non} non-equivalent"))
}

fn edge_set(s: &SimplicialGraph) -> Vec<(usize, usize)> {
    let mut e = s.edges();
    e.sort();
    e
}

fn c13() -> Outcome {
    for name in ["grigorchuk", "fabrykowski_gupta"] {
        let g = group(name);
        let n = nucleus(&g, 1000).unwrap();
        let ng = Group::new(GroupDef::parse(&n.to_dsl(name)).unwrap()).unwrap();
        let gens = generator_set(&ng, None).unwrap();
        for level in 1..=5 {
            let tiles = tile_graph(&g, &n, level, MAX).map_err(|e| e.to_string())?.simplicial();
            let schreier = level_schreier(&ng, &gens, level, MAX).map_err(|e| e.to_string())?.simplicial();
            ensure(edge_set(&tiles) == edge_set(&schreier), format!("{name} level {level}"))?;
        }
    }
    Ok("grigorchuk and fabrykowski_gupta, levels 1..5".into())
}

fn c14() -> Outcome {
    let ds = catalog::dyadic();
    let da = digit_automaton(&ds, &[1], 64).map_err(|e| e.to_string())?;
    let adding = group("adding_machine");
    let a = adding.parse_element("a").unwrap();
    let mut words = 0;
    for n in 0..=10 {
        for i in 0..1usize << n {
            let w = index_to_word(i, 2, n);
            ensure(da.automaton.act(&w).unwrap() == adding.act(&a, &w).unwrap(), format!("differ on {w:?}"))?;
            words += 1;
        }
    }
    Ok(format!("{} states, {words} words agree", da.states.len()))
}

/// `w^g` at level `n` by base-(A, R) addition: the unique `w'` with
/// `A^n g + Σ_k A^{n+1-k} (r_{w_k} - r_{w'_k}) ∈ ℤ^d`.
fn brute_force_add(a: &RationalMatrix, digits: &[Vec<i64>], g: &[i64], w: &[u8]) -> Vec<u8> {
    let n = w.len();
    let d = a.dim();
    let value = |word: &[u8]| {
        let mut v = vec![BigRational::zero(); d];
        for (k, &x) in word.iter().enumerate() {
            for (s, t) in v.iter_mut().zip(a.pow(n - k).apply_int(&digits[x as usize])) {
                *s += t;
            }
        }
        v
    };
    let base: Vec<BigRational> =
        a.pow(n).apply_int(g).into_iter().zip(value(w)).map(|(x, y)| x + y).collect();
    let hits: Vec<Vec<u8>> = (0..digits.len().pow(n as u32))
        .map(|i| index_to_word(i, digits.len(), n))
        .filter(|u| base.iter().zip(value(u)).all(|(x, y)| (x - y).is_integer()))
        .collect();
    assert_eq!(hits.len(), 1, "base-(A,R) addition is not unique on {w:?}");
    hits.into_iter().next().unwrap()
}

fn c15() -> Outcome {
    let ds = catalog::dragon();
    ensure(is_finite_state(ds.matrix()).map_err(|e| e.to_string())?, "dragon matrix not finite-state")?;
    let da = digit_automaton(&ds, &[1, 0], 32).map_err(|e| e.to_string())?;
    for i in 0..8 {
        let w = index_to_word(i, 2, 3);
        let want = brute_force_add(ds.matrix(), ds.digits(), &[1, 0], &w);
        ensure(da.automaton.act(&w).unwrap() == want, format!("differ on {w:?}"))?;
    }
    Ok(format!("{} states", da.states.len()))
}

fn greedy_zeckendorf(mut m: u64) -> Vec<u64> {
    let mut fib = vec![1u64, 2];
    while *fib.last().unwrap() <= m {
        let k = fib.len();
        fib.push(fib[k - 1] + fib[k - 2]);
    }
    let mut parts = Vec::new();
    for &f in fib.iter().rev() {
        if f <= m {
            parts.push(f);
            m -= f;
        }
    }
    parts
}

fn c16() -> Outcome {
    let t = Instant::now();
    for m in 0..10_000u64 {
        let next = fibonacci_successor(m, 24).map_err(|e| e.to_string())?;
        let oracle: u64 = greedy_zeckendorf(m + 1).iter().sum();
        ensure(next == oracle && oracle == m + 1, format!("successor of {m} gave {next}"))?;
    }
    within(t, Duration::from_secs(5), "successor sweep")?;
    Ok(format!("m < 10^4 in {:?}", t.elapsed()))
}

fn c17() -> Outcome {
    let table = penrose_table();
    for map in ["L", "M", "S"] {
        ensure(involution_check(&table, map, 10).map_err(|e| e.to_string())?, format!("{map} is not an involution"))?;
    }
    let abc = Alphabet::with_symbols("abc").unwrap();
    let ca = abc.parse_omega("(ca)").unwrap();
    for map in ["M", "L"] {
        let img = table.apply_map(map, &ca).map_err(|e| e.to_string())?;
        ensure(abc.render_omega(&img) == "(ca)", format!("{map}((ca)) = {}", abc.render_omega(&img)))?;
    }
    Ok("L, M, S at depth 10; (ca) fixed by M and L".into())
}

fn c18() -> Outcome {
    let g = group("img_z2_minus_1");
    let gens = generator_set(&g, None).unwrap();
    let mut report = Vec::new();
    let mut inside = true;
    for n in 3..=5u32 {
        let ball = orbit_ball(&g, &gens, &OmegaWord::constant(1), 1 << n).map_err(|e| e.to_string())?;
        let size = ball.num_vertices();
        let (lo, hi) = (1usize << (2 * n - 2), 1usize << (2 * n + 2));
        inside &= (lo..=hi).contains(&size);
        report.push(format!("n={n}: {size}, band [{lo}, {hi}]"));
    }
    let report = report.join(", ");
    ensure(inside, report.clone())?;
    Ok(report)
}

fn c19() -> Outcome {
    let g = group("grigorchuk");
    for s in ["a", "b", "c", "d"] {
        let e = g.parse_element(s).unwrap();
        ensure(g.order(&e, 64) == Order::Finite(2), format!("order of {s}"))?;
    }
    let ab = g.parse_element("ab").unwrap();
    let power_oracle = (1..=64u64).find(|&k| g.is_trivial(&ab.pow(k as i64)));
    ensure(power_oracle == Some(16), format!("power oracle gave {power_oracle:?}"))?;
    ensure(g.order(&ab, 64) == Order::Finite(16), format!("order(ab) = {:?}", g.order(&ab, 64)))?;
    Ok("|a|=|b|=|c|=|d|=2, |ab|=16".into())
}

fn main() {
    let criteria: [Criterion; 19] = [
        ("grigorchuk nucleus", c1),
        ("adding machine nucleus", c2),
        ("lamplighter exceeds cap 50", c3),
        ("substitution relators", c4),
        ("grigorchuk level orders", c5),
        ("hausdorff estimates", c6),
        ("grigorchuk schreier paths", c7),
        ("fabrykowski-gupta spectra", c8),
        ("det Q_n recursion", c9),
        ("phi_k recursion", c10),
        ("spectrum nesting", c11),
        ("asymptotic equivalence", c12),
        ("tile graph vs nucleus schreier graph", c13),
        ("dyadic digit automaton", c14),
        ("dragon digit automaton", c15),
        ("fibonacci successor", c16),
        ("penrose involutions", c17),
        ("img(z^2-1) ball growth", c18),
        ("grigorchuk torsion", c19),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

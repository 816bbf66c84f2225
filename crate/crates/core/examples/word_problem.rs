//! Word problem, orders and sections in the Grigorchuk group.

use selfsim::catalog;
use selfsim::group::Order;
use selfsim::words::Alphabet;

fn main() -> selfsim::Result<()> {
    let g = catalog::group("grigorchuk")?;
    for w in ["abab", "(ad)^4", "(ac)^8", "[a,b]^4", "(adacac)^4", "abcd"] {
        let e = g.parse_element(w)?;
        println!("{w:>12}  trivial: {}", g.is_trivial(&e));
    }

    for w in ["a", "ab", "ac", "ad", "abc"] {
        let e = g.parse_element(w)?;
        match g.order(&e, 1 << 10) {
            Order::Finite(k) => println!("|{w}| = {k}"),
            Order::Unbounded(cap) => println!("|{w}| > {cap}"),
        }
    }

    let bin = Alphabet::new(2)?;
    let b = g.parse_element("b")?;
    for v in ["0", "1", "11", "111"] {
        let s = g.restriction(&b, &bin.parse_word(v)?)?;
        println!("b|_{v} = {}", g.render(&s));
    }
    let w = bin.parse_word("0110100")?;
    println!("0110100^b = {}", bin.render(&g.act(&b, &w)?));
    Ok(())
}

//! Every catalog entry with its checked facts.

use selfsim::catalog::{self, check_fact, describe_fact, EntryData};

fn main() -> selfsim::Result<()> {
    for name in catalog::names() {
        let entry = catalog::lookup(name)?;
        println!("{name} ({}): {}", entry.kind(), entry.note);
        if let EntryData::Group(_) = entry.data {
            let g = catalog::group(name)?;
            for fact in entry.facts.iter() {
                println!("  {} .. {}", describe_fact(fact), if check_fact(&g, fact)? { "ok" } else { "FAILS" });
            }
        }
    }
    print!("{}", catalog::lookup("fabrykowski_gupta")?.render());
    Ok(())
}

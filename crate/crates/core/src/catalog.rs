//! Built-in groups, digit systems and rule tables.
//!
//! Every entry keeps the defining rules as quoted text and a list of facts
//! that [`check_fact`] can confirm by computation.

use crate::abelian::{DigitSystem, RationalMatrix};
use crate::contraction::{nucleus, DEFAULT_NUCLEUS_CAP};
use crate::error::{Error, Result};
use crate::group::{Group, GroupDef, Order, DEFAULT_MAX_POINTS};
use crate::invsemi::{fibonacci_table, penrose_table, Apollonian, RuleTable};

#[derive(Debug, Clone)]
pub enum EntryData {
    Group(GroupDef),
    Digits(DigitSystem),
    Rules(RuleTable),
    Apollonian(Apollonian),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fact {
    /// The nucleus consists of exactly these elements.
    Nucleus(&'static [&'static str]),
    /// The nucleus search terminates within the default cap.
    Contracting,
    /// The nucleus search passes `cap`.
    NotContracting { cap: usize },
    Order(&'static str, u64),
    /// No power up to `cap` is trivial.
    NoTorsionUpTo(&'static str, u64),
    Trivial(&'static str),
    Nontrivial(&'static str),
    /// `|G / St_G(level)| = 2^log2`.
    LevelOrderLog2 { level: usize, log2: u32 },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub data: EntryData,
    /// Where the definition comes from and its rules as written there.
    pub note: &'static str,
    pub facts: Vec<Fact>,
}

impl CatalogEntry {
    pub fn group_def(&self) -> Result<&GroupDef> {
        match &self.data {
            EntryData::Group(g) => Ok(g),
            _ => Err(Error::InvalidArgument(format!("catalog entry {} is not a group", self.name))),
        }
    }

    pub fn digit_system(&self) -> Result<&DigitSystem> {
        match &self.data {
            EntryData::Digits(d) => Ok(d),
            _ => Err(Error::InvalidArgument(format!("catalog entry {} is not a digit system", self.name))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.data {
            EntryData::Group(_) => "group",
            EntryData::Digits(_) => "digit-system",
            EntryData::Rules(_) | EntryData::Apollonian(_) => "rule-table",
        }
    }

    /// DSL for groups, JSON for digit systems, the rule dump otherwise.
    pub fn render(&self) -> String {
        match &self.data {
            EntryData::Group(g) => g.render(),
            EntryData::Digits(d) => d.to_json(),
            EntryData::Rules(t) => t.dump(),
            EntryData::Apollonian(a) => a.dump(),
        }
    }
}

struct GroupSpec {
    name: &'static str,
    dsl: &'static str,
    note: &'static str,
    facts: &'static [Fact],
}

const INVOLUTIONS_AB: &[Fact] = &[Fact::Order("a", 2), Fact::Order("b", 2), Fact::NoTorsionUpTo("ab", 64), Fact::Contracting];

const GROUPS: &[GroupSpec] = &[
    GroupSpec {
        name: "adding_machine",
        dsl: "a = perm(0 1) [1, a]",
        note: "adding machine: (0w)^a = 1w, (1w)^a = 0w^a",
        facts: &[Fact::Nucleus(&["1", "a", "a'"]), Fact::NoTorsionUpTo("a", 256)],
    },
    GroupSpec {
        name: "dihedral",
        dsl: "a = perm(0 1) [1, 1]\nb = perm() [a, b]",
        note: "infinite dihedral group: (0w)^a=1w, (1w)^a=0w, (0w)^b=0w^a, (1w)^b=1w^b",
        facts: INVOLUTIONS_AB,
    },
    GroupSpec {
        name: "grigorchuk",
        dsl: "a = perm(0 1) [1, 1]\nb = perm() [a, c]\nc = perm() [a, d]\nd = perm() [1, b]",
        note: "Grigorchuk group: (0w)^a=1w, (1w)^a=0w, (0w)^b=0w^a, (1w)^b=1w^c, (0w)^c=0w^a, (1w)^c=1w^d, (0w)^d=0w, (1w)^d=1w^b",
        facts: &[
            Fact::Nucleus(&["1", "a", "b", "c", "d"]),
            Fact::Order("a", 2),
            Fact::Order("b", 2),
            Fact::Order("c", 2),
            Fact::Order("d", 2),
            Fact::Trivial("bcd"),
            Fact::Trivial("(ad)^4"),
            Fact::Trivial("(adacac)^4"),
            Fact::LevelOrderLog2 { level: 3, log2: 7 },
            Fact::LevelOrderLog2 { level: 4, log2: 12 },
            Fact::LevelOrderLog2 { level: 5, log2: 22 },
        ],
    },
    GroupSpec {
        name: "lamplighter",
        dsl: "a = perm(0 1) [b, a]\nb = perm() [b, a]",
        note: "lamplighter group: (0w)^a=1w^b, (1w)^a=0w^a, (0w)^b=0w^b, (1w)^b=1w^a",
        facts: &[Fact::NotContracting { cap: 50 }, Fact::Order("a'b", 2), Fact::NoTorsionUpTo("a", 8)],
    },
    GroupSpec {
        name: "fabrykowski_gupta",
        dsl: "a = perm(0 1 2) [1, 1, 1]\ns = perm() [a, 1, s]",
        note: "Fabrykowski-Gupta group: a=(123), s=(a,1,s)",
        facts: &[Fact::Order("a", 3), Fact::Order("s", 3), Fact::Contracting],
    },
    GroupSpec {
        name: "sierpinski_gasket",
        dsl: "b0 = perm(1 2) [b0, 1, 1]\nb1 = perm(0 2) [1, b1, 1]\nb2 = perm(0 1) [1, 1, b2]",
        note: "Sierpinski gasket group: b_0=(b_0,1,1)σ_{12}, b_1=(1,b_1,1)σ_{02}, b_2=(1,1,b_2)σ_{01}",
        facts: &[Fact::Order("b0", 2), Fact::Order("b1", 2), Fact::Order("b2", 2), Fact::Contracting],
    },
    GroupSpec {
        name: "chebyshev_2",
        dsl: "a = perm(0 1) [1, 1]\nb = perm() [a, b]",
        note: "IMG(T_2), d even: a=(1, …, 1)σ_1, b=(a, 1, …, 1, b)σ_2 with σ_1=(1,2)…(d−1,d), σ_2=(2,3)…(d−2,d−1) on {1..d}",
        facts: INVOLUTIONS_AB,
    },
    GroupSpec {
        name: "chebyshev_3",
        dsl: "a = perm(1 2) [a, 1, 1]\nb = perm(0 1) [1, 1, b]",
        note: "IMG(T_3), d odd: a=(a, 1, 1, …, 1)σ_1, b=(1, 1, …, 1, b)σ_2 with σ_1=(2,3)(4,5)…(d−1,d), σ_2=(1,2)(3,4)…(d−2,d−1) on {1..d}",
        facts: INVOLUTIONS_AB,
    },
    GroupSpec {
        name: "chebyshev_4",
        dsl: "a = perm(0 1)(2 3) [1, 1, 1, 1]\nb = perm(1 2) [a, 1, 1, b]",
        note: "IMG(T_4), d even: a=(1, …, 1)σ_1, b=(a, 1, …, 1, b)σ_2 with σ_1=(1,2)…(d−1,d), σ_2=(2,3)…(d−2,d−1) on {1..d}",
        facts: INVOLUTIONS_AB,
    },
    GroupSpec {
        name: "chebyshev_5",
        dsl: "a = perm(1 2)(3 4) [a, 1, 1, 1, 1]\nb = perm(0 1)(2 3) [1, 1, 1, 1, b]",
        note: "IMG(T_5), d odd: a=(a, 1, 1, …, 1)σ_1, b=(1, 1, …, 1, b)σ_2 with σ_1=(2,3)(4,5)…(d−1,d), σ_2=(1,2)(3,4)…(d−2,d−1) on {1..d}",
        facts: INVOLUTIONS_AB,
    },
    GroupSpec {
        name: "chebyshev_6",
        dsl: "a = perm(0 1)(2 3)(4 5) [1, 1, 1, 1, 1, 1]\nb = perm(1 2)(3 4) [a, 1, 1, 1, 1, b]",
        note: "IMG(T_6), d even: a=(1, …, 1)σ_1, b=(a, 1, …, 1, b)σ_2 with σ_1=(1,2)…(d−1,d), σ_2=(2,3)…(d−2,d−1) on {1..d}",
        facts: INVOLUTIONS_AB,
    },
    GroupSpec {
        name: "img_z2",
        dsl: "t = perm(0 1) [1, t]",
        note: "IMG(z²): τ=(1, τ)σ, the adding machine",
        facts: &[Fact::Nucleus(&["1", "t", "t'"])],
    },
    GroupSpec {
        name: "img_z_minus2",
        dsl: "m = perm(0 1) [1, m']",
        note: "IMG(z^{−2}): μ=(1, μ^{−1})σ, a conjugate of the adding machine",
        facts: &[Fact::NoTorsionUpTo("m", 256), Fact::Contracting],
    },
    GroupSpec {
        name: "img_z2_minus_1",
        dsl: "a = perm(0 1) [b, 1]\nb = perm() [a, 1]",
        note: "IMG(z²−1): a=(b, 1)σ, b=(a, 1); torsion free, [[a^{2^k}, b^{2^k}], b^{2^k}] = [[b^{2^k}, a^{2^{k+1}}], a^{2^{k+1}}] = 1",
        facts: &[
            Fact::NoTorsionUpTo("a", 64),
            Fact::NoTorsionUpTo("b", 64),
            Fact::NoTorsionUpTo("ab", 64),
            Fact::Trivial("[[a^2, b^2], b^2]"),
            Fact::Trivial("[[b^2, a^4], a^4]"),
            Fact::Trivial("[[a^4, b^4], b^4]"),
            Fact::Trivial("[[b^4, a^8], a^8]"),
            Fact::Nontrivial("[a, b]"),
            Fact::Contracting,
        ],
    },
    GroupSpec {
        name: "img_z2_minus_1_over_z2",
        dsl: "a = perm() [1, b]\nb = perm(0 1) [a', 1]",
        note: "IMG((z²−1)/z²): a=(1,b), b=(a^{−1},1)σ",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_z2_minus_2",
        dsl: "a = perm(0 1) [1, 1]\nb = perm() [a, b]",
        note: "IMG(z²−2): a=σ, b=(a,b); isomorphic to the infinite dihedral group",
        facts: INVOLUTIONS_AB,
    },
    GroupSpec {
        name: "img_z2_plus_c_real",
        dsl: "a = perm(0 1) [1, b]\nb = perm() [1, c]\nc = perm() [a, 1]",
        note: "IMG(z²+c), c real with c³+2c²+c+1=0: a=(1,b)σ, b=(1,c), c=(a,1); closure coincides with that of the complex-parameter entry, isomorphism unknown",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_z2_plus_c_complex",
        dsl: "a = perm(0 1) [1, b]\nb = perm() [c, 1]\nc = perm() [a, 1]",
        note: "IMG(z²+c), c non-real with c³+2c²+c+1=0: a=(1,b)σ, b=(c,1), c=(a,1); closure coincides with that of the real-parameter entry, isomorphism unknown",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_z2_minus_2_over_z2",
        dsl: "a = perm() [b, a]\nb = perm(0 1) [b', a']",
        note: "IMG((z²−2)/z²): a=(b,a), b=(b^{−1},a^{−1})σ; isomorphic to ℤ²⋊(ℤ/4)",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_phi_plus",
        dsl: "a = perm() [b, 1]\nb = perm() [1, c]\nc = perm(0 1) [a', b']",
        note: "IMG((z²−φ²)/z²), φ=(1+√5)/2: a=(b,1), b=(1,c), c=(a^{−1},b^{−1})σ",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_phi_minus",
        dsl: "a = perm() [1, b]\nb = perm() [1, c]\nc = perm(0 1) [a', 1]",
        note: "IMG((z²−φ²)/z²), φ=(1−√5)/2: a=(1,b), b=(1,c), c=(a^{−1},1)σ",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_z2_minus_1_over_z2_plus_1",
        dsl: "a = perm(0 1) [1, b]\nb = perm() [a, a']",
        note: "IMG((z²−1)/(z²+1)): a=(1,b)σ, b=(a,a^{−1})",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_z2_minus_1_over_z2_minus_omega",
        dsl: "a = perm(0 1) [1, b]\nb = perm() [c, 1]\nc = perm(0 1) [c'b', a']",
        note: "IMG((z²−1)/(z²−ω)), ω³=1, ω≠1: a=(1,b)σ, b=(c,1), c=(c^{−1}b^{−1},a^{−1})σ",
        facts: &[Fact::Contracting],
    },
    GroupSpec {
        name: "img_z2_plus_i",
        dsl: "a = perm(0 1) [1, 1]\nb = perm() [a, c]\nc = perm() [b, 1]",
        note: "IMG(z²+i): a=σ, b=(a,c), c=(b,1); intermediate growth",
        facts: &[Fact::Order("a", 2), Fact::Order("b", 2), Fact::Order("c", 2), Fact::Contracting],
    },
];

const OTHER: &[(&str, &str)] = &[
    ("dyadic", "digit system A=(1/2), R={0,1}: the virtual endomorphism n ↦ n/2 with domain 2ℤ"),
    ("dragon", "digit system A=(1/2 −1/2; 1/2 1/2), R={(0,0),(1,0)}: the twin dragon tile"),
    ("fibonacci", "Fibonacci transformations: (00w)^a = 10w, (01w)^a = 0(1w)^b, (1w)^b = 0(w^a)"),
    ("penrose", "Penrose tile moves: (aw)^S = cw, (bw)^S = b(w)^M, (cw)^S = aw, (aw)^M = a(w)^L, (bw)^M = cw, (caw)^M = c(aw)^M, (cbw)^M = bbw, (ccw)^M = bcw, (aaw)^L = b(aw)^S, (abw)^L = a(bw)^M, (acw)^L = a(cw)^M, (bbw)^L = b(bw)^S, (bcw)^L = a(cw)^S, (cw)^L = c(w)^L"),
    ("apollonian", "Apollonian net inversions: (iw)^{γ_i} = w, (w)^{γ_i} = iw if the first letter of w is not i"),
];

/// All entry names, groups first.
pub fn names() -> Vec<&'static str> {
    GROUPS.iter().map(|g| g.name).chain(OTHER.iter().map(|o| o.0)).collect()
}

fn dsl_text(spec: &GroupSpec) -> String {
    let degree = spec
        .dsl
        .lines()
        .next()
        .and_then(|l| l.split_once('[').map(|(_, r)| r.split(',').count()))
        .unwrap_or(2);
    format!("group {} alphabet {}\n{}\n", spec.name, degree, spec.dsl)
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    if let Some(spec) = GROUPS.iter().find(|g| g.name == name) {
        return Ok(CatalogEntry {
            name: spec.name,
            data: EntryData::Group(GroupDef::parse(&dsl_text(spec))?),
            note: spec.note,
            facts: spec.facts.to_vec(),
        });
    }
    let &(name, note) = OTHER.iter().find(|o| o.0 == name).ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    let data = match name {
        "dyadic" => EntryData::Digits(dyadic()),
        "dragon" => EntryData::Digits(dragon()),
        "fibonacci" => EntryData::Rules(fibonacci_table()),
        "penrose" => EntryData::Rules(penrose_table()),
        _ => EntryData::Apollonian(Apollonian::new()),
    };
    Ok(CatalogEntry { name, data, note, facts: Vec::new() })
}

pub fn group(name: &str) -> Result<Group> {
    Group::new(lookup(name)?.group_def()?.clone())
}

pub fn dyadic() -> DigitSystem {
    let a = RationalMatrix::new(vec![vec![crate::abelian::parse_rational("1/2").unwrap()]]).unwrap();
    DigitSystem::new(a, vec![vec![0], vec![1]]).unwrap()
}

pub fn dragon() -> DigitSystem {
    let q = |s| crate::abelian::parse_rational(s).unwrap();
    let a = RationalMatrix::new(vec![vec![q("1/2"), q("-1/2")], vec![q("1/2"), q("1/2")]]).unwrap();
    DigitSystem::new(a, vec![vec![0, 0], vec![1, 0]]).unwrap()
}

pub const FACT_ORDER_CAP: u64 = 1 << 12;

/// Confirms one fact about `group` by direct computation.
pub fn check_fact(group: &Group, fact: &Fact) -> Result<bool> {
    Ok(match fact {
        Fact::Nucleus(words) => {
            let n = nucleus(group, DEFAULT_NUCLEUS_CAP)?;
            n.len() == words.len() && words.iter().map(|w| group.parse_element(w)).all(|e| e.is_ok_and(|e| n.contains(group, &e)))
        }
        Fact::Contracting => nucleus(group, DEFAULT_NUCLEUS_CAP).is_ok(),
        Fact::NotContracting { cap } => matches!(nucleus(group, *cap), Err(Error::Exceeded { .. })),
        Fact::Order(w, k) => group.order(&group.parse_element(w)?, FACT_ORDER_CAP) == Order::Finite(*k),
        Fact::NoTorsionUpTo(w, cap) => matches!(group.order(&group.parse_element(w)?, *cap), Order::Unbounded(_)),
        Fact::Trivial(w) => group.is_trivial(&group.parse_element(w)?),
        Fact::Nontrivial(w) => !group.is_trivial(&group.parse_element(w)?),
        Fact::LevelOrderLog2 { level, log2 } => {
            group.level_quotient_order(*level, DEFAULT_MAX_POINTS)? == num_bigint::BigUint::from(1u8) << *log2
        }
    })
}

pub fn describe_fact(fact: &Fact) -> String {
    match fact {
        Fact::Nucleus(w) => format!("nucleus = {{{}}}", w.join(", ")),
        Fact::Contracting => "contracting".into(),
        Fact::NotContracting { cap } => format!("nucleus search exceeds {cap}"),
        Fact::Order(w, k) => format!("order({w}) = {k}"),
        Fact::NoTorsionUpTo(w, cap) => format!("{w}^k != 1 for 0 < k <= {cap}"),
        Fact::Trivial(w) => format!("{w} = 1"),
        Fact::Nontrivial(w) => format!("{w} != 1"),
        Fact::LevelOrderLog2 { level, log2 } => format!("|G/St({level})| = 2^{log2}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let g = lookup("grigorchuk").unwrap();
        let def = g.group_def().unwrap();
        assert_eq!(def.generators().len(), 4);
        assert_eq!(def.degree(), 2);
        let img = lookup("img_z2_minus_1").unwrap();
        assert!(img.render().contains("a = perm(0 1) [b, 1]"));
        assert!(img.render().contains("b = perm() [a, 1]"));
        assert!(matches!(lookup("nonexistent"), Err(Error::UnknownEntry(_))));
        assert_eq!(lookup("chebyshev_5").unwrap().group_def().unwrap().degree(), 5);
    }

    #[test]
    fn every_entry_loads_and_round_trips() {
        for name in names() {
            let e = lookup(name).unwrap();
            if let EntryData::Group(def) = &e.data {
                assert_eq!(&GroupDef::parse(&def.render()).unwrap(), def, "{name}");
                let g = Group::new(def.clone()).unwrap();
                for i in 0..g.num_generators() {
                    assert!(g.generator_automaton(crate::group::Gen::new(i)).automaton().is_invertible(), "{name}");
                }
            }
        }
        assert_eq!(DigitSystem::from_json(&lookup("dragon").unwrap().render()).unwrap(), dragon());
    }

    #[test]
    fn facts_hold() {
        for name in names() {
            let e = lookup(name).unwrap();
            if let EntryData::Group(def) = &e.data {
                let g = Group::new(def.clone()).unwrap();
                for f in &e.facts {
                    assert!(check_fact(&g, f).unwrap(), "{name}: {}", describe_fact(f));
                }
            }
        }
    }
}

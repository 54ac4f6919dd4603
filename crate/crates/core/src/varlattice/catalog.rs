//! The built-in catalog: the four nil systems whose SL-joins exhaust the
//! modular varieties with a length-3 permutational identity, the
//! permutation-tagged witness bases, and a pool of flat-nil varieties for
//! property suites.

use crate::error::Result;
use crate::identities::{make_permutational, parse_system, Identity, IdentitySystem};
use crate::permgroups::Permutation;
use crate::words::parse_word;

use super::FlatNil;

/// A catalog system with a short functional tag (the image of xyz under its
/// defining length-3 arrangement).
#[derive(Debug, Clone)]
pub struct NamedSystem {
    pub tag: &'static str,
    pub system: IdentitySystem,
}

/// The four nil systems of the modular catalog, in fixed order:
/// zyx, yzx, yxz (with xyzt ≈ xzty), xzy (with xyzt ≈ yzxt).
pub fn modular_systems() -> Vec<NamedSystem> {
    let mk = |tag, text: &str| NamedSystem { tag, system: parse_system(text).unwrap() };
    vec![
        mk("zyx", "xyz = zyx; xxy = 0;"),
        mk("yzx", "xyz = yzx; xxy = 0;"),
        mk("yxz", "xyz = yxz; xyzt = xzty; xyy = 0;"),
        mk("xzy", "xyz = xzy; xyzt = yzxt; xxy = 0;"),
    ]
}

/// The canonical nonzero non-linear word shapes of each catalog system, as
/// canonical words. Everything nonzero and non-linear is similar to one of
/// these.
pub fn section_shapes(tag: &str) -> Vec<crate::words::Word> {
    let w = |s: &str| parse_word(s).unwrap();
    match tag {
        "zyx" => vec![w("xx"), w("xyx")],
        "yzx" => vec![w("xx")],
        "yxz" => vec![w("xx"), w("xxy")],
        "xzy" => vec![w("xx"), w("xyy")],
        _ => Vec::new(),
    }
}

/// The witness basis for a non-trivial degree-3 permutation:
/// xyzt ≈ xyx ≈ x² ≈ 0 together with the permutational identity of ρ.
pub fn witness_basis(rho: &Permutation) -> Result<IdentitySystem> {
    let mut ids = vec![
        Identity::Zero(parse_word("xyzt").unwrap()),
        Identity::Zero(parse_word("xyx").unwrap()),
        Identity::Zero(parse_word("xx").unwrap()),
    ];
    ids.push(make_permutational(3, rho)?);
    Ok(IdentitySystem::new(ids))
}

pub fn witness_variety(rho: &Permutation) -> Result<FlatNil> {
    FlatNil::new(witness_basis(rho)?)
}

/// Flat-nil varieties used by the property suites: the catalog systems, the
/// five witness bases, and a few commutative and zero-only systems.
pub fn flat_nil_pool() -> Vec<(String, IdentitySystem)> {
    let mut out: Vec<(String, IdentitySystem)> = modular_systems()
        .into_iter()
        .map(|n| (format!("sys-{}", n.tag), n.system))
        .collect();
    for cycles in ["(12)", "(13)", "(23)", "(123)", "(132)"] {
        let rho = Permutation::from_cycles(cycles, 3).unwrap();
        out.push((format!("witness-{cycles}"), witness_basis(&rho).unwrap()));
    }
    out.push(("comm-square".into(), parse_system("xy = yx; xx = 0;").unwrap()));
    out.push(("comm-cube".into(), parse_system("xy = yx; xyz = 0;").unwrap()));
    out.push(("zeros-only".into(), parse_system("xyzt = 0; xyx = 0; xx = 0;").unwrap()));
    out
}

//! End-to-end verification that the permutation-tagged nil varieties form a
//! modular-but-not-cancellable configuration: for non-trivial ρ, σ, τ with
//! pairwise distinct generated subgroups, the varieties X and Y differ while
//! their meets and joins with V coincide.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::Identity;
use crate::permgroups::{perm_n, PermGroup, Permutation};
use crate::words::{canonical_pairs, canonical_words};

use super::catalog::witness_basis;
use super::{join_theory, meet, theory_equal, JoinTheory, VarietyDescriptor};

/// Machine-readable report of one witness verification.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub rho: String,
    pub sigma: String,
    pub tau: String,
    #[serde(rename = "perm3_V")]
    pub perm3_v: String,
    #[serde(rename = "perm3_X")]
    pub perm3_x: String,
    #[serde(rename = "perm3_Y")]
    pub perm3_y: String,
    pub meet_equal: bool,
    pub join_equal: bool,
    #[serde(rename = "X_neq_Y")]
    pub x_neq_y: bool,
    pub perm3_meet: String,
    pub perm3_join: String,
    pub overall: bool,
}

impl WitnessReport {
    pub fn text(&self) -> String {
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        format!(
            "rho={} sigma={} tau={}\n\
             Perm_3(V) = {}\nPerm_3(X) = {}\nPerm_3(Y) = {}\n\
             X != Y: {}\nV ∧ X = V ∧ Y: {}\nV ∨ X = V ∨ Y: {}\n\
             Perm_3(V ∧ X) = {}\nPerm_3(V ∨ X) = {}\n\
             overall: {}",
            self.rho,
            self.sigma,
            self.tau,
            self.perm3_v,
            self.perm3_x,
            self.perm3_y,
            mark(self.x_neq_y),
            mark(self.meet_equal),
            mark(self.join_equal),
            self.perm3_meet,
            self.perm3_join,
            if self.overall { "PASS" } else { "FAIL" }
        )
    }
}

/// All identities with both sides of length ≤ max_len, in joint canonical
/// form, including zero identities. The comparison fragment for join
/// theories.
pub fn canonical_identities(max_len: usize) -> Vec<Identity> {
    let mut out: Vec<Identity> =
        canonical_words(max_len).into_iter().map(Identity::Zero).collect();
    out.extend(
        canonical_pairs(max_len).into_iter().filter(|(u, v)| u != v).map(|(u, v)| Identity::Plain(u, v)),
    );
    out
}

fn join_theories_agree(a: &JoinTheory, b: &JoinTheory, max_len: usize) -> Result<bool> {
    for id in canonical_identities(max_len) {
        if a.holds(&id)? != b.holds(&id)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Memo for repeated verifications: witness varieties and their meets are
/// shared across triples.
#[derive(Default)]
pub struct WitnessCache {
    varieties: std::collections::BTreeMap<String, VarietyDescriptor>,
    meets: std::collections::BTreeMap<(String, String), VarietyDescriptor>,
}

impl WitnessCache {
    fn variety(&mut self, p: &Permutation) -> Result<VarietyDescriptor> {
        if let Some(v) = self.varieties.get(&p.to_string()) {
            return Ok(v.clone());
        }
        let v = VarietyDescriptor::flat_nil(witness_basis(p)?)?;
        self.varieties.insert(p.to_string(), v.clone());
        Ok(v)
    }

    fn meet_of(&mut self, a: &Permutation, b: &Permutation) -> Result<VarietyDescriptor> {
        let mut key = (a.to_string(), b.to_string());
        if key.0 > key.1 {
            key = (key.1.clone(), key.0.clone());
        }
        if let Some(m) = self.meets.get(&key) {
            return Ok(m.clone());
        }
        let m = meet(&self.variety(a)?, &self.variety(b)?)?;
        self.meets.insert(key, m.clone());
        Ok(m)
    }
}

/// Verifies the full configuration for one triple, each claim with a
/// machine-checked certificate behind it.
pub fn verify_cancellation_witness(
    rho: &Permutation,
    sigma: &Permutation,
    tau: &Permutation,
) -> Result<WitnessReport> {
    verify_cancellation_witness_cached(rho, sigma, tau, &mut WitnessCache::default())
}

pub fn verify_cancellation_witness_cached(
    rho: &Permutation,
    sigma: &Permutation,
    tau: &Permutation,
    cache: &mut WitnessCache,
) -> Result<WitnessReport> {
    for p in [rho, sigma, tau] {
        if p.degree() != 3 {
            return Err(Error::Precondition(format!("{p} is not a degree-3 permutation")));
        }
        if p.is_identity() {
            return Err(Error::Precondition("the permutations must be non-trivial".into()));
        }
    }
    let groups: Vec<PermGroup> = [rho, sigma, tau]
        .iter()
        .map(|p| PermGroup::generated(3, std::slice::from_ref(*p)))
        .collect::<Result<_>>()?;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if groups[i].element_set() == groups[j].element_set() {
            return Err(Error::Precondition(format!(
                "generated subgroups collide: {} and {}",
                groups[i].name(),
                groups[j].name()
            )));
        }
    }

    let v = cache.variety(rho)?;
    let x = cache.variety(sigma)?;
    let y = cache.variety(tau)?;

    let perm_v = perm_n(&v, 3)?;
    let perm_x = perm_n(&x, 3)?;
    let perm_y = perm_n(&y, 3)?;
    let perms_exact = perm_v.exact && perm_x.exact && perm_y.exact;
    let perms_match = perm_v.lower.element_set() == groups[0].element_set()
        && perm_x.lower.element_set() == groups[1].element_set()
        && perm_y.lower.element_set() == groups[2].element_set();

    let x_neq_y = !theory_equal(&x, &y)?;
    let meet_vx = cache.meet_of(rho, sigma)?;
    let meet_vy = cache.meet_of(rho, tau)?;
    let meet_equal = theory_equal(&meet_vx, &meet_vy)?;
    let join_equal = join_theories_agree(&join_theory(&v, &x), &join_theory(&v, &y), 4)?;

    let perm_meet = perm_n(&meet_vx, 3)?;
    let meet_is_full = perm_meet.exact && perm_meet.lower.order() == 6;
    let join_group = perm_v.lower.meet(&perm_x.lower)?;
    let join_is_trivial = join_group.is_trivial() && perm_v.exact && perm_x.exact;

    let overall = perms_exact
        && perms_match
        && x_neq_y
        && meet_equal
        && join_equal
        && meet_is_full
        && join_is_trivial;
    Ok(WitnessReport {
        rho: rho.to_string(),
        sigma: sigma.to_string(),
        tau: tau.to_string(),
        perm3_v: perm_v.display(),
        perm3_x: perm_x.display(),
        perm3_y: perm_y.display(),
        meet_equal,
        join_equal,
        x_neq_y,
        perm3_meet: perm_meet.display(),
        perm3_join: join_group.name(),
        overall,
    })
}

/// Verifies every admissible triple with a shared cache.
pub fn verify_all_admissible() -> Result<Vec<WitnessReport>> {
    let mut cache = WitnessCache::default();
    admissible_triples()
        .iter()
        .map(|(r, s, t)| verify_cancellation_witness_cached(r, s, t, &mut cache))
        .collect()
}

/// Every admissible ordered triple: the 4 non-trivial proper subgroups of
/// S_3, each represented by its least generator, taken in all 24 ordered
/// selections of three distinct subgroups.
pub fn admissible_triples() -> Vec<(Permutation, Permutation, Permutation)> {
    let reps: Vec<Permutation> = ["(12)", "(13)", "(23)", "(123)"]
        .iter()
        .map(|s| Permutation::from_cycles(s, 3).unwrap())
        .collect();
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && a != c && b != c {
                    out.push((reps[a].clone(), reps[b].clone(), reps[c].clone()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::from_cycles(s, 3).unwrap()
    }

    #[test]
    fn the_standard_triple_passes() {
        let r = verify_cancellation_witness(&p("(12)"), &p("(13)"), &p("(123)")).unwrap();
        assert!(r.overall, "report: {}", r.text());
        assert_eq!(r.perm3_v, "gr{(12)} (exact)");
        assert_eq!(r.perm3_meet, "S3 (exact)");
        assert_eq!(r.perm3_join, "T");
    }

    #[test]
    fn colliding_subgroups_are_rejected() {
        assert!(verify_cancellation_witness(&p("(12)"), &p("(12)"), &p("(13)")).is_err());
        // (123) and (132) generate the same order-3 subgroup
        assert!(verify_cancellation_witness(&p("(123)"), &p("(132)"), &p("(12)")).is_err());
        assert!(verify_cancellation_witness(&p("(12)"), &p("(13)"), &p("(123)")).is_ok());
    }

    #[test]
    fn twenty_four_admissible_triples() {
        let ts = admissible_triples();
        assert_eq!(ts.len(), 24);
    }
}

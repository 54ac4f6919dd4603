//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p varsem --test acceptance -- --nocapture` to see
//! the lines; thresholds and tolerances are pinned in the asserts.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use varsem::engine::{
    check_model, decide, enumerate_models, satisfies_system, saturate, Budget, FiniteSemigroup,
};
use varsem::identities::{parse_identity, parse_system, Identity, IdentitySystem};
use varsem::permgroups::{
    all_subgroups, factorial, lower_bound_from_seed, perm_n, PermGroup, Permutation,
};
use varsem::varlattice::{
    catalog, classify_word, family, find_descriptor_deduction, join_theory, meet, witness,
    FlatNil, VarietyDescriptor, WordClass,
};
use varsem::words::{canonical_words, parse_word, Word};

fn verdict(criterion: usize, name: &str, pass: bool) {
    println!("CRITERION {criterion:2} [{}] {name}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {name}");
}

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

// The four catalog nil varieties, built once and shared (their summary caches
// hold the expensive five-letter saturations).
fn catalog_varieties() -> &'static Vec<(String, FlatNil)> {
    static CACHE: OnceLock<Vec<(String, FlatNil)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        catalog::modular_systems()
            .into_iter()
            .map(|n| (n.tag.to_string(), FlatNil::new(n.system).unwrap()))
            .collect()
    })
}

fn witness_varieties() -> &'static Vec<(Permutation, FlatNil)> {
    static CACHE: OnceLock<Vec<(Permutation, FlatNil)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        ["(12)", "(13)", "(23)", "(123)", "(132)"]
            .iter()
            .map(|s| {
                let p = Permutation::from_cycles(s, 3).unwrap();
                let f = catalog::witness_variety(&p).unwrap();
                (p, f)
            })
            .collect()
    })
}

#[test]
fn acceptance_01_witness_configuration() {
    let start = Instant::now();
    let reports = witness::verify_all_admissible().unwrap();
    let elapsed = start.elapsed();
    let all_pass = reports.len() == 24 && reports.iter().all(|r| r.overall);
    for r in &reports {
        assert!(r.x_neq_y && r.meet_equal && r.join_equal, "triple {} {} {}", r.rho, r.sigma, r.tau);
        assert_eq!(r.perm3_meet, "S3 (exact)");
        assert_eq!(r.perm3_join, "T");
    }
    let in_time = elapsed.as_secs_f64() < 60.0;
    println!("  24 admissible triples verified in {:.1} s", elapsed.as_secs_f64());
    verdict(1, "witness configuration over all 24 triples", all_pass && in_time);
}

#[test]
fn acceptance_02_subgroup_lattice_of_degree_three() {
    let start = Instant::now();
    let lattice = all_subgroups(3).unwrap();
    let orders: Vec<usize> = lattice.groups.iter().map(|g| g.order()).collect();
    let mut ok = lattice.groups.len() == 6 && orders == vec![1, 2, 2, 2, 3, 6];
    // four pairwise-incomparable proper subgroups strictly between T and S3
    let atoms: Vec<usize> = (0..6).filter(|&i| orders[i] > 1 && orders[i] < 6).collect();
    ok &= atoms.len() == 4;
    for &a in &atoms {
        for &b in &atoms {
            if a != b {
                ok &= !lattice.groups[a].is_subgroup_of(&lattice.groups[b]);
            }
        }
    }
    // Hasse: T below each atom, each atom below S3, nothing else
    let mut expected: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &a in &atoms {
        expected.insert((0, a));
        expected.insert((a, 5));
    }
    ok &= lattice.hasse.iter().copied().collect::<BTreeSet<_>>() == expected;
    ok &= start.elapsed().as_secs_f64() < 1.0;
    verdict(2, "degree-3 subgroup lattice shape", ok);
}

#[test]
fn acceptance_03_perm_calculus() {
    let start = Instant::now();
    let mut ok = true;

    // the witness varieties have exactly their generating subgroup at degree 3
    for (p, f) in witness_varieties() {
        let comp = perm_n(&VarietyDescriptor::FlatNil(f.clone()), 3).unwrap();
        let expected = PermGroup::generated(3, std::slice::from_ref(p)).unwrap();
        ok &= comp.exact && comp.lower.element_set() == expected.element_set();
    }

    // each catalog system reaches the full group at degree 4
    for (tag, f) in catalog_varieties() {
        let comp = perm_n(&VarietyDescriptor::FlatNil(f.clone()), 4).unwrap();
        ok &= comp.exact && comp.lower.order() == factorial(4);
        assert!(comp.exact, "degree-4 computation for {tag} not exact");
    }

    // seed lower bounds are contained in the computed groups at degree 4
    let seed_cases: Vec<(&str, Identity)> = vec![
        ("yxz", parse_identity("xyz = yxz").unwrap()),
        ("xzy", parse_identity("xyz = xzy").unwrap()),
        ("zyx", parse_identity("xyz = zyx").unwrap()),
        ("yzx", parse_identity("xyz = yzx").unwrap()),
    ];
    for (tag, seed) in &seed_cases {
        let f = &catalog_varieties().iter().find(|(t, _)| t == tag).unwrap().1;
        let bound = lower_bound_from_seed(seed, 4).unwrap();
        let comp = perm_n(&VarietyDescriptor::FlatNil(f.clone()), 4).unwrap();
        ok &= bound.is_subgroup_of(&comp.lower);
    }

    // degree 5, all four seed cases, within the five-minute budget
    for (tag, seed, n) in [
        ("yxz", parse_identity("xyz = yxz").unwrap(), 5usize),
        ("xzy", parse_identity("xyz = xzy").unwrap(), 5),
        ("zyx", parse_identity("xyz = zyx").unwrap(), 5),
        ("yzx", parse_identity("xyz = yzx").unwrap(), 5),
        ("yxz", parse_identity("xyzt = xzty").unwrap(), 5),
    ] {
        let f = &catalog_varieties().iter().find(|(t, _)| t == tag).unwrap().1;
        let bound = lower_bound_from_seed(&seed, n).unwrap();
        let comp = perm_n(&VarietyDescriptor::FlatNil(f.clone()), n).unwrap();
        ok &= comp.exact && bound.is_subgroup_of(&comp.lower);
    }
    let elapsed = start.elapsed();
    println!("  perm calculus up to degree 5 in {:.1} s", elapsed.as_secs_f64());
    verdict(3, "Perm_n calculus with seed containments", ok && elapsed.as_secs_f64() < 300.0);
}

#[test]
fn acceptance_04_group_laws_of_join_and_meet() {
    let pool: Vec<(String, FlatNil)> = {
        let mut v: Vec<(String, FlatNil)> = witness_varieties()
            .iter()
            .map(|(p, f)| (format!("witness-{p}"), f.clone()))
            .collect();
        v.extend(catalog_varieties().iter().cloned());
        v.push((
            "comm-square".into(),
            FlatNil::new(parse_system("xy = yx; xx = 0;").unwrap()).unwrap(),
        ));
        v.push((
            "comm-cube".into(),
            FlatNil::new(parse_system("xy = yx; xyz = 0;").unwrap()).unwrap(),
        ));
        v.push((
            "zeros-only".into(),
            FlatNil::new(parse_system("xyzt = 0; xyx = 0; xx = 0;").unwrap()).unwrap(),
        ));

        v
    };
    // all pairs over the five witness varieties plus mixed pairs: 15 ≥ 10
    let mut pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| ((i + 1)..5).map(move |j| (i, j))).collect();
    pairs.extend([(5, 6), (7, 8), (9, 0), (10, 5), (11, 8)]);
    assert!(pairs.len() >= 10);

    let mut violations = 0usize;
    for &(i, j) in &pairs {
        let (a, b) = (&pool[i].1, &pool[j].1);
        let da = VarietyDescriptor::FlatNil(a.clone());
        let db = VarietyDescriptor::FlatNil(b.clone());
        for n in [3usize, 4] {
            let ga = perm_n(&da, n).unwrap();
            let gb = perm_n(&db, n).unwrap();
            // the group of the meet variety is the join of the groups
            let m = meet(&da, &db).unwrap();
            let gm = perm_n(&m, n).unwrap();
            let join_groups = ga.lower.join(&gb.lower).unwrap();
            if !(gm.exact && gm.lower.element_set() == join_groups.element_set()) {
                violations += 1;
                eprintln!("meet law fails for {} ∧ {} at degree {n}", pool[i].0, pool[j].0);
            }
            // the group of the join variety is the meet of the groups
            let meet_groups = ga.lower.meet(&gb.lower).unwrap();
            let jt = join_theory(&da, &db);
            let mut join_sat = BTreeSet::new();
            for pi in varsem::permgroups::symmetric_elements(n) {
                let id = varsem::identities::make_permutational(n, &pi).unwrap();
                if jt.holds(&id).unwrap() {
                    join_sat.insert(pi);
                }
            }
            if join_sat != *meet_groups.element_set() {
                violations += 1;
                eprintln!("join law fails for {} ∨ {} at degree {n}", pool[i].0, pool[j].0);
            }
        }
    }
    verdict(4, "group laws over ≥ 10 pairs at degrees 3 and 4", violations == 0);
}

#[test]
fn acceptance_05_word_classification() {
    // expected nonzero non-linear shapes per system, as canonical words
    let expected_s: Vec<(&str, Vec<Word>)> = vec![
        ("zyx", vec![w("xx"), w("xyx")]),
        ("yzx", vec![w("xx")]),
        ("yxz", vec![w("xx"), w("xxy")]),
        ("xzy", vec![w("xx"), w("xyy")]),
    ];
    let mut ok = true;
    for (tag, shapes) in &expected_s {
        let f = &catalog_varieties().iter().find(|(t, _)| t == tag).unwrap().1;
        let mut seen_s: Vec<Word> = Vec::new();
        for word in canonical_words(5) {
            let class = classify_word(f, &word).unwrap();
            match class {
                WordClass::L => {
                    ok &= word.is_linear();
                }
                WordClass::S1 | WordClass::S2 => seen_s.push(word.clone()),
                WordClass::Z => {}
            }
            // linear words never land in Z or S for these systems
            if word.is_linear() {
                ok &= class == WordClass::L;
            }
        }
        let expected: BTreeSet<Word> = shapes.iter().cloned().collect();
        let got: BTreeSet<Word> = seen_s.iter().cloned().collect();
        if got != expected {
            eprintln!("system {tag}: S-words {got:?}, expected {expected:?}");
            ok = false;
        }
        // the split: one-letter S-words are squares, two-letter ones similar
        for word in &seen_s {
            let c = word.content().len();
            let class = classify_word(f, word).unwrap();
            ok &= (c == 1 && class == WordClass::S1) || (c == 2 && class == WordClass::S2);
        }
    }
    verdict(5, "section classification of canonical words up to length 5", ok);
}

#[test]
fn acceptance_06_linear_collapse_rule() {
    // nil bases containing x_1⋯x_n ≈ w with ℓ(w) ≠ n force x_1⋯x_n ≈ 0
    let cases: Vec<(&str, &str)> = vec![
        ("xy = xyx; xxx = 0;", "xy = 0"),
        ("xy = xyy; yyy = 0;", "xy = 0"),
        ("xyz = xyzx; xx = 0;", "xyz = 0"),
        ("xyz = xy; zzz = 0;", "xyz = 0"),
        ("xyzt = xyztt; ttt = 0;", "xyzt = 0"),
    ];
    let budget = Budget::default();
    let mut ok = true;
    for (basis, goal) in &cases {
        let sys = parse_system(basis).unwrap();
        let id = parse_identity(goal).unwrap();
        let d = decide(&sys, &id, &budget).unwrap();
        if !d.holds() {
            eprintln!("{goal} not derived from {basis}: {d:?}");
            ok = false;
        }
    }
    verdict(6, "linear words collapse under length-changing identities", ok);
}

#[test]
fn acceptance_07_soundness_against_small_models() {
    let mut checked = 0usize;
    let mut violations = 0usize;
    for (name, sys) in catalog::flat_nil_pool() {
        let cong = saturate(&sys, 3, 5).unwrap();
        let models: Vec<FiniteSemigroup> = (1..=3)
            .flat_map(|k| enumerate_models(&IdentitySystem::empty(), k).unwrap())
            .filter(|s| satisfies_system(s, &sys).unwrap())
            .collect();
        assert!(!models.is_empty(), "{name} has no small models");
        for (_root, members) in cong.classes() {
            let rep = cong.universe().word_at(members[0]);
            for &ix in &members[1..] {
                let u = cong.universe().word_at(ix);
                let id = Identity::Plain(u.clone(), rep.clone());
                for s in &models {
                    checked += 1;
                    if !check_model(s, &id).unwrap() {
                        violations += 1;
                        eprintln!("{name}: merge {u} ~ {rep} fails in an order-{} model", s.order());
                    }
                }
            }
        }
    }
    println!("  validated {checked} merge/model pairs");
    verdict(7, "every congruence merge holds in every small model", violations == 0);
}

#[test]
fn acceptance_08_semilattice_oracle_equivalence() {
    let s2 = FiniteSemigroup::semilattice2();
    let mut ok = true;
    let mut count = 0usize;
    for id in witness::canonical_identities(4) {
        let by_content = varsem::identities::holds_in_sl(&id);
        let by_model = check_model(&s2, &id).unwrap();
        if by_content != by_model {
            eprintln!("disagreement on {id}");
            ok = false;
        }
        count += 1;
    }
    println!("  {count} canonical identities cross-checked");
    verdict(8, "content rule agrees with the two-element semilattice", ok);
}

#[test]
fn acceptance_09_lattice_checks() {
    let p = |s: &str| Permutation::from_cycles(s, 3).unwrap();
    let v = VarietyDescriptor::flat_nil(catalog::witness_basis(&p("(12)")).unwrap()).unwrap();
    let x = VarietyDescriptor::flat_nil(catalog::witness_basis(&p("(13)")).unwrap()).unwrap();
    let y = VarietyDescriptor::flat_nil(catalog::witness_basis(&p("(123)")).unwrap()).unwrap();
    let seeds: Vec<VarietyDescriptor> = vec![
        VarietyDescriptor::Trivial,
        VarietyDescriptor::SL,
        v.clone(),
        x.clone(),
        y.clone(),
        VarietyDescriptor::sl_join(catalog::witness_basis(&p("(12)")).unwrap()).unwrap(),
        VarietyDescriptor::sl_join(catalog::witness_basis(&p("(13)")).unwrap()).unwrap(),
        VarietyDescriptor::sl_join(catalog::witness_basis(&p("(123)")).unwrap()).unwrap(),
    ];
    let fam = family::FiniteFamily::close_descriptors(&seeds, family::DEFAULT_FAMILY_CAP).unwrap();
    println!("  closed family has {} members", fam.size());
    let mut ok = fam.size() <= 64;

    let iv = fam.index_of(&v).unwrap();
    ok &= fam.is_modular(iv);

    let witness_pair = fam.cancellation_witness(iv);
    let (ix, iy) = (fam.index_of(&x).unwrap(), fam.index_of(&y).unwrap());
    match witness_pair {
        Some((a, b)) => {
            let got: BTreeSet<usize> = [a, b].into();
            let expected: BTreeSet<usize> = [ix, iy].into();
            if got != expected {
                eprintln!(
                    "cancellation witness is ({}, {}), expected ({}, {})",
                    fam.label(a),
                    fam.label(b),
                    fam.label(ix),
                    fam.label(iy)
                );
                ok = false;
            }
        }
        None => {
            eprintln!("no cancellation witness found");
            ok = false;
        }
    }

    // SL is neutral inside the family
    let isl = fam.index_of(&VarietyDescriptor::SL).unwrap();
    ok &= fam.is_neutral(isl);

    // the pentagon reproduces the classical modularity counterexample
    let n5 = family::pentagon();
    ok &= n5.modular_counterexample(2) == Some((1, 3));
    verdict(9, "family checks: modular, not cancellable, pentagon", ok);
}

#[test]
fn acceptance_10_deduction_properties() {
    // SL-joined pairs: a catalog system against a witness variety
    let p = |s: &str| Permutation::from_cycles(s, 3).unwrap();
    let mut pairs = Vec::new();
    for (tag, f) in catalog_varieties() {
        for cycles in ["(12)", "(13)"] {
            let a = VarietyDescriptor::SLJoin(f.clone());
            let b = VarietyDescriptor::sl_join(catalog::witness_basis(&p(cycles)).unwrap()).unwrap();
            pairs.push((tag.clone(), cycles, a, b));
        }
    }
    let mut found = 0usize;
    let mut violations = 0usize;
    'outer: for (tag, _cycles, a, b) in &pairs {
        let f = &catalog_varieties().iter().find(|(t, _)| t == tag).unwrap().1;
        let words: Vec<Word> = canonical_words(4).into_iter().filter(|u| u.content().len() <= 3).collect();
        for u in &words {
            for vw in &words {
                if u >= vw || u.content() != vw.content() {
                    continue;
                }
                let Some(d) = find_descriptor_deduction(a, b, u, vw, 5, 8).unwrap() else {
                    continue;
                };
                if d.steps() == 0 {
                    continue;
                }
                found += 1;
                // content invariance along the sequence
                let c0 = d.words[0].content();
                if !d.words.iter().all(|x| x.content() == c0) {
                    violations += 1;
                }
                // at most two zero words, and adjacent when there are two
                let z: Vec<usize> = d
                    .words
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| classify_word(f, x).unwrap() == WordClass::Z)
                    .map(|(i, _)| i)
                    .collect();
                if z.len() > 2 || (z.len() == 2 && z[1] != z[0] + 1) {
                    violations += 1;
                    eprintln!("zero words at {z:?} in\n{d}");
                }
                if found >= 100 {
                    break 'outer;
                }
            }
        }
    }
    println!("  inspected {found} minimal deductions");
    verdict(10, "content invariance and the zero-word bound", found >= 100 && violations == 0);
}

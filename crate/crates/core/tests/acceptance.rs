//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything is exact integer/rational equality; there are no tolerances.

use arrstab::characters::{
    char_table, class_size, induce_from_parabolic, ClassFunction, ClassId, Group, IrrId,
};
use arrstab::combin::SplitMix;
use arrstab::ground::{GroundSpace, RootFamily, SpaceKind, Torsion};
use arrstab::linalg::{snf, IMat};
use arrstab::oracle::{components_of, verify_layer_model, RootDatum};
use arrstab::partition::{enumerate, LabelledPartition};
use arrstab::poset::LayerPoset;
use arrstab::spectral::{
    betti, e2_character, e2_pieces, elliptic_h1, h1_discrepancy_note, h1_dimension,
    local_os_trace, printed_h1_dimension, stability_scan, type_a_elliptic_injectivity, StableName,
};
use arrstab::weyl::{all_elements, orbits_by_hat, SignedPermutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeSet, HashMap};

const FAMILIES: [RootFamily; 4] =
    [RootFamily::A, RootFamily::B, RootFamily::C, RootFamily::D];
const SPACES: [SpaceKind; 3] = [SpaceKind::Linear, SpaceKind::Toric, SpaceKind::Elliptic];

fn parse(s: &str) -> LabelledPartition {
    LabelledPartition::from_json(&serde_json::from_str(s).unwrap()).unwrap()
}

fn check_poset_matches_figure(
    poset: &LayerPoset,
    nodes: &[&str],
    edges: &[(usize, usize)],
    profile: &[usize],
) {
    assert_eq!(poset.len(), nodes.len());
    assert_eq!(poset.rank_counts(), profile);
    let mapped: Vec<usize> = nodes
        .iter()
        .map(|s| poset.index_of(&parse(s)).expect("figure node present"))
        .collect();
    let unique: BTreeSet<usize> = mapped.iter().copied().collect();
    assert_eq!(unique.len(), nodes.len(), "figure nodes map bijectively");
    let mut expected: Vec<(usize, usize)> =
        edges.iter().map(|&(a, b)| (mapped[a], mapped[b])).collect();
    expected.sort_unstable();
    let mut got = poset.covers.clone();
    got.sort_unstable();
    assert_eq!(got, expected, "Hasse relations match the printed figure");
}

#[test]
fn c01_poset_reproduction() {
    // Example 3.1 poset for (C, toric, 2); torsion 1 ↦ e, -1 ↦ a
    let sp = GroundSpace::new(SpaceKind::Toric);
    let poset = LayerPoset::build(RootFamily::C, &sp, 2, None);
    let nodes = [
        r#"{"n":2,"blocks":[["1"],["1-"],["2"],["2-"]],"labels":{}}"#,
        r#"{"n":2,"blocks":[["2","2-"],["1"],["1-"]],"labels":{"0":"a"}}"#,
        r#"{"n":2,"blocks":[["1","1-"],["2"],["2-"]],"labels":{"0":"e"}}"#,
        r#"{"n":2,"blocks":[["2","2-"],["1"],["1-"]],"labels":{"0":"e"}}"#,
        r#"{"n":2,"blocks":[["1","2"],["1-","2-"]],"labels":{}}"#,
        r#"{"n":2,"blocks":[["1","2-"],["1-","2"]],"labels":{}}"#,
        r#"{"n":2,"blocks":[["1","1-"],["2"],["2-"]],"labels":{"0":"a"}}"#,
        r#"{"n":2,"blocks":[["1","1-"],["2","2-"]],"labels":{"0":"e","1":"a"}}"#,
        r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"e"}}"#,
        r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"a"}}"#,
        r#"{"n":2,"blocks":[["1","1-"],["2","2-"]],"labels":{"0":"a","1":"e"}}"#,
    ];
    let edges = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (0, 5),
        (0, 6),
        (1, 7),
        (2, 7),
        (2, 8),
        (3, 8),
        (4, 8),
        (5, 8),
        (1, 9),
        (4, 9),
        (5, 9),
        (6, 9),
        (3, 10),
        (6, 10),
    ];
    check_poset_matches_figure(&poset, &nodes, &edges, &[1, 6, 4]);

    // Example 3.2 poset for (B, elliptic, 2); torsion z1..z4 ↦ e, a, b, ab
    let spe = GroundSpace::new(SpaceKind::Elliptic);
    let poset_b = LayerPoset::build(RootFamily::B, &spe, 2, None);
    let nodes_b = [
        r#"{"n":2,"blocks":[["1"],["1-"],["2"],["2-"]],"labels":{}}"#,
        r#"{"n":2,"blocks":[["1","1-"],["2"],["2-"]],"labels":{"0":"e"}}"#,
        r#"{"n":2,"blocks":[["2","2-"],["1"],["1-"]],"labels":{"0":"e"}}"#,
        r#"{"n":2,"blocks":[["1","2"],["1-","2-"]],"labels":{}}"#,
        r#"{"n":2,"blocks":[["1","2-"],["1-","2"]],"labels":{}}"#,
        r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"e"}}"#,
        r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"a"}}"#,
        r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"b"}}"#,
        r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"ab"}}"#,
    ];
    let edges_b = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 5),
        (2, 5),
        (3, 5),
        (4, 5),
        (3, 6),
        (4, 6),
        (3, 7),
        (4, 7),
        (3, 8),
        (4, 8),
    ];
    check_poset_matches_figure(&poset_b, &nodes_b, &edges_b, &[1, 4, 4]);
    println!("criterion 1: PASS — printed Hasse diagrams reproduced exactly");
}

#[test]
fn c02_layer_model_verification() {
    let mut runs = 0;
    for family in FAMILIES {
        for kind in [SpaceKind::Toric, SpaceKind::Elliptic] {
            let sp = GroundSpace::new(kind);
            for n in 2..=3 {
                let r = verify_layer_model(family, &sp, n, None).unwrap();
                assert!(r.pass, "{family:?}/{kind:?} n={n}: {}", r.detail);
                runs += 1;
            }
            let r = verify_layer_model(family, &sp, 4, Some(3)).unwrap();
            assert!(r.pass, "{family:?}/{kind:?} n=4 rank≤3: {}", r.detail);
            runs += 1;
        }
        let sp = GroundSpace::new(SpaceKind::Linear);
        for n in 1..=4 {
            let r = verify_layer_model(family, &sp, n, None).unwrap();
            assert!(r.pass, "{family:?}/linear n={n}: {}", r.detail);
            runs += 1;
        }
    }
    println!("criterion 2: PASS — oracle isomorphism verified in {runs} cases");
}

#[test]
fn c03_orbit_classification() {
    let mut fibers_checked = 0;
    for family in FAMILIES {
        for kind in SPACES {
            let sp = GroundSpace::new(kind);
            for n in 1..=4 {
                let all = enumerate(family, &sp, n, None);
                let top = all.iter().map(|p| p.rank()).max().unwrap();
                let mut covered = 0;
                for rank in 0..=top {
                    // orbits_by_hat asserts fiber == generator closure
                    let fibers = orbits_by_hat(family, &sp, n, rank);
                    fibers_checked += fibers.len();
                    covered += fibers.values().map(|f| f.len()).sum::<usize>();
                }
                assert_eq!(covered, all.len());
            }
        }
    }
    println!("criterion 3: PASS — {fibers_checked} hat-fibers are single orbits");
}

#[test]
fn c04_h1_dimension_table() {
    for family in FAMILIES {
        for kind in SPACES {
            let sp = GroundSpace::new(kind);
            for n in 2..=8 {
                let computed = h1_dimension(family, &sp, n).unwrap();
                if family == RootFamily::D && kind == SpaceKind::Elliptic {
                    if n >= 3 {
                        assert_eq!(computed, n * (n - 1) / 2 + n, "D/elliptic n={n}");
                    } else {
                        assert_eq!(computed, 2 * n, "D/elliptic n={n}");
                    }
                    // printed value agrees through n = 3; flagged from n = 4
                    let flag = h1_discrepancy_note(family, kind, n);
                    if n >= 4 {
                        assert!(flag.is_some());
                        assert_ne!(computed, printed_h1_dimension(family, kind, n));
                    } else {
                        assert!(flag.is_none());
                        assert_eq!(computed, printed_h1_dimension(family, kind, n));
                    }
                } else {
                    assert_eq!(
                        computed,
                        printed_h1_dimension(family, kind, n),
                        "{family:?}/{kind:?} n={n}"
                    );
                }
            }
        }
    }
    println!("criterion 4: PASS — degree-one dimension table reproduced (11 cells printed, type D elliptic flagged)");
}

#[test]
fn c05_stable_decompositions() {
    let linear = stability_scan(1, RootFamily::A, &GroundSpace::new(SpaceKind::Linear), 2, 8)
        .unwrap();
    for name in [StableName::S(vec![]), StableName::S(vec![1]), StableName::S(vec![2])] {
        let seq = linear.mults_of(&name).unwrap();
        for n in 4..=8 {
            assert_eq!(seq[n - 2], 1, "linear {name} at n={n}");
        }
    }
    let toric =
        stability_scan(1, RootFamily::A, &GroundSpace::new(SpaceKind::Toric), 2, 8).unwrap();
    for (name, want) in [
        (StableName::S(vec![]), 2),
        (StableName::S(vec![1]), 2),
        (StableName::S(vec![2]), 1),
    ] {
        let seq = toric.mults_of(&name).unwrap();
        for n in 4..=8 {
            assert_eq!(seq[n - 2], want, "toric {name} at n={n}");
        }
    }
    let elliptic =
        stability_scan(1, RootFamily::A, &GroundSpace::new(SpaceKind::Elliptic), 2, 8).unwrap();
    for (name, want) in [(StableName::S(vec![]), 2), (StableName::S(vec![1]), 2)] {
        let seq = elliptic.mults_of(&name).unwrap();
        for n in 2..=8 {
            assert_eq!(seq[n - 2], want, "elliptic {name} at n={n}");
        }
    }
    assert!(elliptic.mults_of(&StableName::S(vec![2])).is_none());
    // H^1 = E2^{1,0} for elliptic type A: the differential has no kernel
    for n in 2..=8 {
        let (dim, ch) = elliptic_h1(n, RootFamily::A).unwrap();
        assert_eq!(dim, 2 * n);
        let e210 = e2_character(1, 0, n, RootFamily::A, &GroundSpace::new(SpaceKind::Elliptic))
            .unwrap();
        assert_eq!(ch, e210);
    }
    println!("criterion 5: PASS — type A stable multiplicities (1,1,1), (2,2,1), (2,2,0)");
}

#[test]
fn c06_example_decompositions() {
    let toric = GroundSpace::new(SpaceKind::Toric);
    // E2^{1,0}(2) for toric B is V((1),(1))
    let ch = e2_character(1, 0, 2, RootFamily::B, &toric).unwrap();
    let dec = ch.decompose().unwrap();
    assert_eq!(dec.len(), 1);
    let v11 = IrrId::W(arrstab::characters::Bipartition { plus: vec![1], minus: vec![1] });
    assert_eq!(dec[0], (v11.clone(), 1));

    // H^1 for (D, toric, 2) = V((1),(1)) ⊕ V((2),∅) ⊕ V(∅,(2))
    let (dim, h1) = betti(1, 2, RootFamily::D, &toric).unwrap();
    assert_eq!(dim, 4);
    let dec = h1.decompose().unwrap();
    let expect = [
        (IrrId::W(arrstab::characters::Bipartition { plus: vec![2], minus: vec![] }), 1),
        (v11, 1),
        (IrrId::W(arrstab::characters::Bipartition { plus: vec![], minus: vec![2] }), 1),
    ];
    let as_set: BTreeSet<String> = dec.iter().map(|(i, m)| format!("{i}×{m}")).collect();
    let expect_set: BTreeSet<String> =
        expect.iter().map(|(i, m)| format!("{i}×{m}")).collect();
    assert_eq!(as_set, expect_set);

    // (B, toric, 2): dim 6 with three pieces of dimension 2 + 2 + 2
    let (dim_b, _) = betti(1, 2, RootFamily::B, &toric).unwrap();
    assert_eq!(dim_b, 6);
    let pieces = e2_pieces(0, 1, 2, RootFamily::B, &toric).unwrap();
    let mut dims: Vec<usize> = pieces.iter().map(|p| p.induced_dim(2)).collect();
    dims.push(e2_character(1, 0, 2, RootFamily::B, &toric).unwrap().dim_usize());
    dims.sort_unstable();
    assert_eq!(dims, vec![2, 2, 2]);
    println!("criterion 6: PASS — printed degree-one decompositions match");
}

#[test]
fn c07_induced_pieces_identity() {
    let mut checked = 0;
    for family in FAMILIES {
        for kind in SPACES {
            let sp = GroundSpace::new(kind);
            for (p, q) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
                for n in (p + 2 * q).max(1)..=6 {
                    let pieces = e2_pieces(p, q, n, family, &sp).unwrap();
                    let direct = e2_character(p, q, n, family, &sp).unwrap();
                    let mut total = ClassFunction::zero(direct.group);
                    for piece in &pieces {
                        total =
                            total.add(&induce_from_parabolic(&piece.inner, n).unwrap()).unwrap();
                    }
                    assert_eq!(
                        total, direct,
                        "{family:?}/{kind:?} (p,q,n)=({p},{q},{n})"
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 7: PASS — induced-piece sums equal fixed-layer characters in {checked} cells");
}

#[test]
fn c08_type_a_elliptic_injectivity() {
    for n in 2..=6 {
        let r = type_a_elliptic_injectivity(n, 1).unwrap();
        assert!(r.injective, "q=1, n={n}");
    }
    for n in 3..=5 {
        let r = type_a_elliptic_injectivity(n, 2).unwrap();
        assert!(r.injective, "q=2, n={n}");
    }
    // consequently the elliptic type A degree-one onset is 4i - 2 = 2
    let scan =
        stability_scan(1, RootFamily::A, &GroundSpace::new(SpaceKind::Elliptic), 2, 8).unwrap();
    assert_eq!(scan.onset, 2);
    assert_eq!(scan.predicted_bound, 2);
    println!("criterion 8: PASS — q-axis differentials injective; elliptic type A onset 2");
}

#[test]
fn c09_stability_bounds() {
    for family in FAMILIES {
        for kind in SPACES {
            let sp = GroundSpace::new(kind);
            let report = stability_scan(1, family, &sp, 2, 8).unwrap();
            assert!(report.onset <= 4, "{family:?}/{kind:?} onset {}", report.onset);
            assert!(
                report.dim_poly_degree <= 2,
                "{family:?}/{kind:?} degree {}",
                report.dim_poly_degree
            );
        }
    }
    for kind in [SpaceKind::Linear, SpaceKind::Toric] {
        let sp = GroundSpace::new(kind);
        let report = stability_scan(2, RootFamily::A, &sp, 2, 8).unwrap();
        assert!(report.onset <= 8, "A/{kind:?} i=2 onset {}", report.onset);
        // window-limited: consistency with the bound, not a hard equality
        assert!(
            report.note.contains("consistent with bound 8"),
            "A/{kind:?} note: {}",
            report.note
        );
        assert!(report.dim_poly_degree <= 4);
    }
    println!("criterion 9: PASS — onsets within 4 (i=1) and window-consistent (i=2)");
}

fn perm_sign(w: &SignedPermutation) -> i64 {
    let n = w.n();
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            if w.image(i) > w.image(j) {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn eps_product(w: &SignedPermutation) -> i64 {
    (0..w.n()).map(|i| w.sign(i) as i64).product()
}

#[test]
fn c10_character_theory() {
    // full orthogonality
    for n in 1..=6 {
        let t = char_table(Group::S(n));
        for i in 0..t.irreducibles.len() {
            for j in 0..t.irreducibles.len() {
                let fi = ClassFunction { group: t.group, values: t.values[i].clone() };
                let fj = ClassFunction { group: t.group, values: t.values[j].clone() };
                let want = if i == j { BigRational::one() } else { BigRational::zero() };
                assert_eq!(fi.inner_product(&fj).unwrap(), want, "S_{n} ({i},{j})");
            }
        }
    }
    for n in 1..=4 {
        let t = char_table(Group::W(n));
        for i in 0..t.irreducibles.len() {
            for j in 0..t.irreducibles.len() {
                let fi = ClassFunction { group: t.group, values: t.values[i].clone() };
                let fj = ClassFunction { group: t.group, values: t.values[j].clone() };
                let want = if i == j { BigRational::one() } else { BigRational::zero() };
                assert_eq!(fi.inner_product(&fj).unwrap(), want, "W_{n} ({i},{j})");
            }
        }
    }

    // Frobenius reciprocity on random triples
    let mut rng = SplitMix::new(7171);
    let mut triples = 0;
    while triples < 120 {
        let n = 2 + rng.below(3); // 2..=4
        let k = 1 + rng.below(n);
        let tn = char_table(Group::W(n));
        let tk = char_table(Group::W(k));
        let f = ClassFunction {
            group: Group::W(k),
            values: tk.values[rng.below(tk.irreducibles.len())].clone(),
        };
        let chi = ClassFunction {
            group: Group::W(n),
            values: tn.values[rng.below(tn.irreducibles.len())].clone(),
        };
        let lhs = induce_from_parabolic(&f, n).unwrap().inner_product(&chi).unwrap();
        // ⟨f ⊠ triv, Res χ⟩ over W_k × W_{n-k} by summing over element pairs
        // of small groups directly
        let elements_k = all_elements(RootFamily::C, k);
        let elements_m = all_elements(RootFamily::C, n - k);
        let mut rhs = BigRational::zero();
        for a in &elements_k {
            for b in &elements_m {
                // embed (a, b) into W_n block-diagonally
                let mut sigma = Vec::with_capacity(n);
                let mut eps = Vec::with_capacity(n);
                for i in 0..k {
                    sigma.push(a.image(i) + 1);
                    eps.push(a.sign(i));
                }
                for i in 0..n - k {
                    sigma.push(b.image(i) + k + 1);
                    eps.push(b.sign(i));
                }
                let w = SignedPermutation::new(sigma, eps).unwrap();
                rhs += f.value_at_element(a) * chi.value_at_element(&w);
            }
        }
        rhs /= BigRational::from(Group::W(k).order() * Group::W(n - k).order());
        assert_eq!(lhs, rhs);
        triples += 1;
    }

    // W_3 table against the explicit 48-element enumeration: ten trace
    // functions built from matrices and linear twists
    let elements = all_elements(RootFamily::C, 3);
    assert_eq!(elements.len(), 48);
    // brute-force conjugacy classes
    let mut classes: Vec<Vec<SignedPermutation>> = Vec::new();
    let mut assigned: BTreeSet<SignedPermutation> = BTreeSet::new();
    for w in &elements {
        if assigned.contains(w) {
            continue;
        }
        let class: BTreeSet<SignedPermutation> = elements
            .iter()
            .map(|g| g.compose(w).unwrap().compose(&g.invert()).unwrap())
            .collect();
        for x in &class {
            assigned.insert(x.clone());
        }
        classes.push(class.into_iter().collect());
    }
    assert_eq!(classes.len(), 10);
    let reps: Vec<&SignedPermutation> = classes.iter().map(|c| &c[0]).collect();
    // explicit trace functions
    let reflection = |w: &SignedPermutation| -> i64 {
        (0..3).filter(|&i| w.image(i) == i).map(|i| w.sign(i) as i64).sum()
    };
    let std2 = |w: &SignedPermutation| -> i64 {
        (0..3).filter(|&i| w.image(i) == i).count() as i64 - 1
    };
    let fns: Vec<Box<dyn Fn(&SignedPermutation) -> i64>> = vec![
        Box::new(|_| 1),
        Box::new(perm_sign),
        Box::new(eps_product),
        Box::new(|w| perm_sign(w) * eps_product(w)),
        Box::new(std2),
        Box::new(move |w| std2(w) * eps_product(w)),
        Box::new(reflection),
        Box::new(move |w| reflection(w) * perm_sign(w)),
        Box::new(move |w| reflection(w) * eps_product(w)),
        Box::new(move |w| reflection(w) * perm_sign(w) * eps_product(w)),
    ];
    // constancy on brute classes, then match against the table rows
    let mut explicit_rows: BTreeSet<Vec<i64>> = BTreeSet::new();
    for f in &fns {
        for class in &classes {
            let v0 = f(&class[0]);
            assert!(class.iter().all(|w| f(w) == v0), "trace constant on classes");
        }
        explicit_rows.insert(reps.iter().map(|w| f(w)).collect());
    }
    assert_eq!(explicit_rows.len(), 10);
    let t = char_table(Group::W(3));
    let mut table_rows: BTreeSet<Vec<i64>> = BTreeSet::new();
    for row in &t.values {
        let as_elements: Vec<i64> = reps
            .iter()
            .map(|w| {
                let ct = w.cycle_type();
                let idx = t.class_index(&ClassId::W(ct)).unwrap();
                row[idx].to_integer().to_i64().unwrap()
            })
            .collect();
        table_rows.insert(as_elements);
    }
    assert_eq!(explicit_rows, table_rows, "W_3 table equals the explicit construction");
    println!("criterion 10: PASS — orthogonality, reciprocity, and the explicit W_3 table");
}

#[test]
fn c11_oracle_properties() {
    // SNF certificates are enforced inside snf(); exercise them on random
    // matrices and on every root datum
    let mut rng = SplitMix::new(4242);
    for _ in 0..40 {
        let r = 1 + rng.below(4);
        let c = 1 + rng.below(4);
        let rows: Vec<Vec<i64>> =
            (0..r).map(|_| (0..c).map(|_| rng.below(19) as i64 - 9).collect()).collect();
        let s = snf(&IMat::from_i64(&rows));
        let fac = s.invariant_factors();
        for w in fac.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }
    // component counts versus direct two-torsion enumeration for sampled
    // subsets of the arrangement's defining constraints, n ≤ 3
    for family in FAMILIES {
        for kind in SPACES {
            let sp = GroundSpace::new(kind);
            for n in 2..=3 {
                let datum = RootDatum::new(family, n);
                let constraints: Vec<(Vec<i64>, Torsion)> = datum
                    .positive_roots
                    .iter()
                    .map(|root| {
                        let content =
                            root.iter().fold(0i64, |g, &x| num_integer::Integer::gcd(&g, &x));
                        let z = if content.abs() == 2 && sp.torsion_order() > 1 {
                            sp.torsion_elements()[rng.below(sp.torsion_order())]
                        } else {
                            Torsion::E
                        };
                        (root.clone(), z)
                    })
                    .collect();
                for _ in 0..12 {
                    let take = 1 + rng.below(constraints.len().min(4));
                    let mut subset = Vec::new();
                    for _ in 0..take {
                        subset.push(constraints[rng.below(constraints.len())].clone());
                    }
                    let comps = components_of(&subset, &sp, n).unwrap();
                    // independent expected count: SNF torsion of the stacked
                    // primitive matrix, κ-th power
                    let prim: Vec<Vec<BigInt>> = subset
                        .iter()
                        .map(|(root, _)| {
                            let d = root
                                .iter()
                                .fold(0i64, |g, &x| num_integer::Integer::gcd(&g, &x))
                                .abs();
                            root.iter().map(|&x| BigInt::from(x / d)).collect()
                        })
                        .collect();
                    let t = snf(&IMat::from_rows_n(prim, n))
                        .torsion_order()
                        .to_usize()
                        .unwrap();
                    let expected = t.pow(sp.torsion_rank() as u32);
                    assert!(
                        comps.len() == expected || comps.is_empty(),
                        "{family:?}/{kind:?}: {} components, torsion predicts {expected}",
                        comps.len()
                    );
                    for layer in &comps {
                        assert_eq!(layer.dimension(), n - layer.rank());
                    }
                }
            }
        }
    }
    println!("criterion 11: PASS — SNF certificates and component counts validated");
}

#[test]
fn c12_mobius_os_consistency() {
    // independent Whitney numbers from a from-scratch Möbius recursion
    fn brute_whitney(poset: &LayerPoset, at: usize) -> Vec<BigInt> {
        let interval: Vec<usize> =
            (0..poset.len()).filter(|&z| poset.leq_idx(z, at)).collect();
        let mut order = interval.clone();
        order.sort_by_key(|&z| poset.rank_of[z]);
        let mut mu: HashMap<usize, BigInt> = HashMap::new();
        for &z in &order {
            if z == poset.bottom {
                mu.insert(z, BigInt::one());
                continue;
            }
            let mut acc = BigInt::zero();
            for &y in &order {
                if y != z && poset.leq_idx(y, z) {
                    acc += &mu[&y];
                }
            }
            mu.insert(z, -acc);
        }
        let mut dims = vec![BigInt::zero(); poset.rank_of[at] + 1];
        for &z in &order {
            dims[poset.rank_of[z]] += mu[&z].abs();
        }
        dims
    }

    let mut checked = 0;
    for family in FAMILIES {
        for kind in SPACES {
            let sp = GroundSpace::new(kind);
            for n in 2..=5 {
                let poset = LayerPoset::build(family, &sp, n, Some(2));
                for at in 0..poset.len() {
                    let lib = poset.local_os_dims(at).unwrap();
                    let brute = brute_whitney(&poset, at);
                    assert_eq!(lib, brute, "{family:?}/{kind:?} n={n}");
                    let id = SignedPermutation::identity(n);
                    let tr = local_os_trace(&id, &poset.elements[at], family).unwrap();
                    assert_eq!(BigInt::from(tr), lib[poset.rank_of[at]]);
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 12: PASS — Whitney numbers and identity traces agree at {checked} layers");
}

/// Complete-suite consistency spots that back several criteria: class counts,
/// class sizes, and the Euler-characteristic cross-check.
#[test]
fn euler_characteristic_consistency() {
    for family in FAMILIES {
        for kind in [SpaceKind::Linear, SpaceKind::Toric] {
            let sp = GroundSpace::new(kind);
            for n in 2..=4 {
                // χ(M) from cohomology
                let mut chi_h = BigInt::zero();
                for i in 0..=n {
                    let (dim, _) = betti(i, n, family, &sp).unwrap();
                    let term = BigInt::from(dim);
                    if i % 2 == 0 {
                        chi_h += term;
                    } else {
                        chi_h -= term;
                    }
                }
                // χ(M) from the layer poset: Σ_Σ (-1)^rk |μ| χ(X)^{dim}
                let poset = LayerPoset::build(family, &sp, n, None);
                let chi_x: i64 = match kind {
                    SpaceKind::Linear => 1,
                    SpaceKind::Toric => 0,
                    SpaceKind::Elliptic => 0,
                };
                let mut chi_p = BigInt::zero();
                for at in 0..poset.len() {
                    let mu = poset.mobius(poset.bottom, at).unwrap().abs();
                    let dim = n - poset.rank_of[at];
                    let factor = BigInt::from(chi_x).pow(dim as u32);
                    let term = mu * factor;
                    if poset.rank_of[at] % 2 == 0 {
                        chi_p += term;
                    } else {
                        chi_p -= term;
                    }
                }
                assert_eq!(chi_h, chi_p, "{family:?}/{kind:?} n={n}");
            }
        }
    }
    println!("consistency: PASS — Euler characteristics agree between routes");
}

#[test]
fn class_data_matches_brute_force() {
    for n in 1..=4 {
        let t = char_table(Group::W(n));
        let elements = all_elements(RootFamily::C, n);
        for (i, class) in t.classes.iter().enumerate() {
            let ClassId::W(c) = class else { unreachable!() };
            let count = elements.iter().filter(|w| &w.cycle_type() == c).count();
            assert_eq!(BigInt::from(count), t.class_sizes[i]);
            assert_eq!(class_size(Group::W(n), class), t.class_sizes[i]);
        }
        let total: BigInt = t.class_sizes.iter().sum();
        assert_eq!(total, Group::W(n).order());
    }
    println!("consistency: PASS — class sizes match enumeration");
}

use nilpoisson::algebra::{check_identity, IdentityKind, PoissonPair};
use nilpoisson::exactnum::{MPoly, Rat, Scalar};
use nilpoisson::families::{Delta, FamilyTag};
use nilpoisson::nullfiliform::mu0;
use nilpoisson::solver::{
    assemble, jacobi_reduce, match_family, match_family_with, nullspace, solve, MatchReport, SolutionSpace,
};
use nilpoisson::Error;
use proptest::prelude::*;

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn transposed(n: usize, d: &str) -> SolutionSpace {
    solve(n, &r(d), IdentityKind::Transposed).unwrap()
}

fn e(n: usize, i: usize) -> Vec<MPoly> {
    let mut v = vec![MPoly::zero(); n];
    v[i - 1] = MPoly::one();
    v
}

/// 2[e_1, e_{i+1}] - δ(e_1·[e_1,e_i] + e_{i-1}·[e_1,e_2]) for i = 2..n-1.
fn recurrence_defects(space: &SolutionSpace) -> Vec<(usize, Vec<MPoly>)> {
    let n = space.n;
    let pair = space.parametrized_pair().unwrap();
    let d = MPoly::constant(space.delta.clone());
    let two = MPoly::from_int(2);
    let b12 = pair.bracket.get(1, 2);
    let mut out = Vec::new();
    for i in 2..n {
        let lhs: Vec<MPoly> = pair
            .bracket
            .get(1, i + 1)
            .into_iter()
            .map(|x| two.clone() * &x)
            .collect();
        let t1 = pair.base.multiply(&e(n, 1), &pair.bracket.get(1, i)).unwrap();
        let t2 = pair.base.multiply(&e(n, i - 1), &b12).unwrap();
        let defect: Vec<MPoly> = lhs
            .into_iter()
            .zip(t1.into_iter().zip(t2))
            .map(|(l, (a, b))| l - &(d.clone() * &(a + &b)))
            .collect();
        if defect.iter().any(|x| !x.is_zero()) {
            out.push((i, defect));
        }
    }
    out
}

#[test]
fn unknown_count_and_symbolic_rejection() {
    let sys = assemble(5, &Delta::Value(r("1")), IdentityKind::Transposed).unwrap();
    assert_eq!(sys.unknowns.len(), 50);
    assert!(matches!(
        assemble(5, &Delta::Symbolic, IdentityKind::Transposed),
        Err(Error::UnsupportedMode(_))
    ));
    assert!(assemble(5, &Delta::Value(r("1")), IdentityKind::Jacobi).is_err());
}

#[test]
fn delta_zero_kernel_is_e1e2_only() {
    let sys = assemble(5, &Delta::Value(r("0")), IdentityKind::Transposed).unwrap();
    let space = nullspace(&sys);
    assert_eq!(space.dimension(), 5);
    for (k, b) in space.basis.iter().enumerate() {
        for (i, j) in b.pairs() {
            let nz: Vec<usize> = (1..=5).filter(|&t| !b.entry(i, j)[t - 1].is_zero()).collect();
            if (i, j) == (1, 2) {
                assert_eq!(nz.len(), 1, "p{} spans one coordinate of [e1,e2]", k + 1);
            } else {
                assert!(nz.is_empty(), "p{} touches [e{i},e{j}]", k + 1);
            }
        }
    }
    // e_3..e_n are central, Jacobi is vacuous
    let reduced = jacobi_reduce(&space).unwrap();
    assert_eq!(reduced, space);
}

#[test]
fn delta_one_loses_alpha1_in_the_linear_layer() {
    let sys = assemble(5, &Delta::Value(r("1")), IdentityKind::Transposed).unwrap();
    let space = nullspace(&sys);
    assert_eq!(space.dimension(), 4);
    let reduced = jacobi_reduce(&space).unwrap();
    assert!(reduced.forced.is_empty());
    assert_eq!(reduced.dimension(), 4);
}

#[test]
fn dimension_four_generic_delta_forces_alpha2() {
    for d in ["3", "1/2", "3/2", "-4", "5/2"] {
        let s = transposed(4, d);
        assert_eq!(s.forced, vec!["p3=0".to_string()], "delta {d}");
        assert_eq!(s.dimension(), 2);
        assert!(match_family_with(&s, FamilyTag::Dim4, 4, &[1, 2]).unwrap().is_match());
    }
    // δ = -1 keeps α_2
    let s = transposed(4, "-1");
    assert!(s.forced.is_empty());
    assert!(match_family_with(&s, FamilyTag::Dim4, 4, &[1]).unwrap().is_match());
}

#[test]
fn zero_space_is_fixed_by_jacobi_reduce() {
    let s = solve(5, &r("3"), IdentityKind::DeltaPoisson).unwrap();
    assert!(s.is_zero_space());
    assert_eq!(s.dimension(), 0);
    assert_eq!(jacobi_reduce(&s).unwrap(), s);
}

#[test]
fn match_examples() {
    let s = transposed(5, "1");
    match match_family(&s, FamilyTag::TP1, 5).unwrap() {
        MatchReport::Match { substitution } => {
            assert_eq!(substitution.len(), 4);
            for (p, form) in &substitution {
                assert_eq!(form.len(), 1, "{p} -> {form}");
            }
        }
        other => panic!("{other:?}"),
    }
    assert!(match_family(&transposed(6, "3"), FamilyTag::TPdelta, 6)
        .unwrap()
        .is_match());
    let zero = solve(5, &r("0"), IdentityKind::DeltaPoisson).unwrap();
    match match_family(&zero, FamilyTag::TP0, 5).unwrap() {
        MatchReport::Mismatch { pair, .. } => assert_eq!(pair, (1, 2)),
        other => panic!("{other:?}"),
    }
    // wrong family shape
    assert!(!match_family(&transposed(5, "2"), FamilyTag::TP1, 5).unwrap().is_match());
    assert!(matches!(
        match_family(&s, FamilyTag::TP1, 6),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn recurrence_holds_on_solved_spaces() {
    for n in 4..=7 {
        for d in ["0", "1", "2", "3", "1/2", "-1", "5/2"] {
            let s = transposed(n, d);
            let bad = recurrence_defects(&s);
            assert!(bad.is_empty(), "n={n} delta={d}: {bad:?}");
        }
    }
}

#[test]
fn solved_basis_brackets_satisfy_the_identity() {
    for n in 3..=6 {
        for d in ["0", "1", "2", "3", "-1"] {
            for kind in [IdentityKind::Transposed, IdentityKind::DeltaPoisson] {
                let s = solve(n, &r(d), kind).unwrap();
                for b in &s.basis {
                    let pair = PoissonPair::new(mu0(n).unwrap(), b.clone(), r(d)).unwrap();
                    assert!(check_identity(&pair, kind).all_zero, "n={n} delta={d} {kind}");
                }
                let full = s.parametrized_pair().unwrap();
                assert!(check_identity(&full, IdentityKind::Jacobi).all_zero);
            }
        }
    }
}

#[test]
fn solution_space_json_round_trip_and_determinism() {
    let a = transposed(5, "1");
    let b = transposed(5, "1");
    let ja = serde_json::to_string(&a).unwrap();
    assert_eq!(ja, serde_json::to_string(&b).unwrap());
    let back: SolutionSpace = serde_json::from_str(&ja).unwrap();
    assert_eq!(back, a);
    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    assert_eq!(v["kind"], "transposed");
    assert_eq!(v["delta"], "1");
    assert_eq!(v["free"], serde_json::json!(["p1", "p2", "p3", "p4"]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generic_delta_supports_e1e2_on_the_last_three(
        n in 5usize..=6,
        (p, q) in (-9i64..=9, 1i64..=5)
    ) {
        let d = Rat::new(p, q).unwrap();
        prop_assume!(d != r("0") && d != r("1") && d != r("2"));
        let s = solve(n, &d, IdentityKind::Transposed).unwrap();
        prop_assert_eq!(s.dimension(), 3);
        let e12 = s.parametrized().get(1, 2);
        for t in 1..=n - 3 {
            prop_assert!(e12[t - 1].is_zero());
        }
        prop_assert!(match_family(&s, FamilyTag::TPdelta, n).unwrap().is_match());
    }
}

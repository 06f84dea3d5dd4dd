//! Randomized invariants: field axioms for the scalar arithmetic, kernel
//! properties of the exact solver, structural laws of the superbracket, and
//! the signed permutation maps.

use proptest::prelude::*;
use twisted_n2::{
    antisymmetry_residual, bracket_basis, jacobi_residual, kernel_basis, solve_in_span,
    super_cycle, super_twist, AlgebraInstance, BasisVector, Element, ExactMatrix, Gaussian,
    GammaVector, Homogeneity, Kind, Poly, Scalar, Sector, Tensor2, Tensor3, Window,
};

fn arb_gaussian() -> impl Strategy<Value = Gaussian> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(rn, rd, in_, id)| {
        Gaussian {
            re: num_rational::BigRational::new(rn.into(), rd.into()),
            im: num_rational::BigRational::new(in_.into(), id.into()),
        }
    })
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(arb_gaussian(), 0..3).prop_map(Poly::from_coeffs)
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (arb_poly(), arb_poly()).prop_map(|(num, den)| {
        let den = if den.is_zero() { Poly::one() } else { den };
        Scalar::new(num, den)
    })
}

fn arb_rational_scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Scalar::from_ratio(n, d))
}

proptest! {
    #[test]
    fn addition_is_associative_and_commutative(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_is_associative(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_scalars_invert(a in arb_scalar()) {
        prop_assume!(!a.is_zero());
        let inv = a.checked_inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn subtraction_undoes_addition(a in arb_scalar(), b in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) - &b, a);
    }
}

fn arb_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(arb_rational_scalar(), rows * cols).prop_map(move |entries| {
            let mut m = ExactMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, entries[r * cols + c].clone());
                }
            }
            m
        })
    })
}

proptest! {
    #[test]
    fn kernel_vectors_annihilate(m in arb_matrix()) {
        let basis = kernel_basis(&m);
        prop_assert_eq!(basis.len() + m.rank(), m.cols());
        for v in &basis {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(kernel_basis(&m), basis);
    }

    #[test]
    fn span_solve_reproduces_combinations(
        gens in proptest::collection::vec(proptest::collection::vec(arb_rational_scalar(), 4), 1..4),
        coeffs in proptest::collection::vec(arb_rational_scalar(), 3),
    ) {
        let target: Vec<Scalar> = (0..4)
            .map(|j| {
                gens.iter()
                    .zip(&coeffs)
                    .fold(Scalar::zero(), |acc, (g, c)| &acc + &(&g[j] * c))
            })
            .collect();
        let sol = solve_in_span(&target, &gens).unwrap();
        let sol = sol.expect("target was built inside the span");
        let rebuilt: Vec<Scalar> = (0..4)
            .map(|j| {
                gens.iter()
                    .zip(&sol)
                    .fold(Scalar::zero(), |acc, (g, c)| &acc + &(&g[j] * c))
            })
            .collect();
        prop_assert_eq!(rebuilt, target);
    }
}

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Scalar>();
    assert_send_sync::<ExactMatrix>();
    assert_send_sync::<Element>();
    assert_send_sync::<AlgebraInstance>();
    assert_send_sync::<twisted_n2::DerivationTable>();
    assert_send_sync::<twisted_n2::AutoTable>();
    assert_send_sync::<Tensor2>();
    assert_send_sync::<Tensor3>();
}

fn twisted_basis() -> Vec<BasisVector> {
    Window::integer(4).basis(&AlgebraInstance::twisted())
}

fn rank2_basis() -> Vec<BasisVector> {
    Window::integer(2).basis(&AlgebraInstance::rank_two())
}

fn arb_twisted_bv() -> impl Strategy<Value = BasisVector> {
    proptest::sample::select(twisted_basis())
}

fn arb_rank2_bv() -> impl Strategy<Value = BasisVector> {
    proptest::sample::select(rank2_basis())
}

/// Literal half-integer bracket table, written with the `(−1)^{2p}` sign
/// convention and doubled indices; an independent path to compare against.
fn literal_bracket(inst: &AlgebraInstance, x: &BasisVector, y: &BasisVector) -> Element {
    fn doubled(bv: &BasisVector) -> i64 {
        2 * bv.index.coords[0]
            + if bv.index.sector == Sector::Shifted {
                1
            } else {
                0
            }
    }
    fn half(n: i64) -> Scalar {
        Scalar::from_ratio(n, 2)
    }
    let sign = |n: i64| if n.rem_euclid(2) == 1 { -1 } else { 1 };
    let parity_product_odd = x.kind == Kind::G && y.kind == Kind::G;
    match (x.kind, y.kind) {
        (Kind::C, _) | (_, Kind::C) => Element::zero(),
        (Kind::L, Kind::L) => {
            let (m2, n2) = (doubled(x), doubled(y));
            let mut out = Element::term(
                BasisVector::l(GammaVector::half_steps(m2 + n2)),
                half(m2 - n2),
            );
            if m2 + n2 == 0 && inst.central_charge {
                let m = half(m2);
                let central = &(&(&(&m * &m) * &m) - &m) * &Scalar::from_ratio(1, 12);
                out.add_term(BasisVector::c(), central);
            }
            out
        }
        (Kind::L, Kind::T) => {
            let (m2, r2) = (doubled(x), doubled(y));
            Element::term(
                BasisVector::t(GammaVector::half_steps(m2 + r2)),
                -&half(r2),
            )
        }
        (Kind::T, Kind::T) => {
            let (r2, s2) = (doubled(x), doubled(y));
            if r2 + s2 == 0 && inst.central_charge {
                Element::term(BasisVector::c(), &half(r2) * &Scalar::from_ratio(1, 3))
            } else {
                Element::zero()
            }
        }
        (Kind::L, Kind::G) => {
            let (m2, p2) = (doubled(x), doubled(y));
            Element::term(
                BasisVector::g(GammaVector::half_steps(m2 + p2)),
                &Scalar::from_ratio(m2, 4) - &half(p2),
            )
        }
        (Kind::T, Kind::G) => {
            let (r2, p2) = (doubled(x), doubled(y));
            Element::basis(BasisVector::g(GammaVector::half_steps(r2 + p2)))
        }
        (Kind::G, Kind::G) => {
            let (p2, q2) = (doubled(x), doubled(y));
            if (p2 + q2).rem_euclid(2) == 0 {
                let s = Scalar::from_int(sign(p2));
                let mut out = Element::term(
                    BasisVector::l(GammaVector::half_steps(p2 + q2)),
                    &s * &Scalar::from_int(2),
                );
                if p2 + q2 == 0 && inst.central_charge {
                    let sq_minus = Scalar::from_ratio(p2 * p2 - 1, 12);
                    out.add_term(BasisVector::c(), &s * &sq_minus);
                }
                out
            } else {
                let s = Scalar::from_int(sign(p2 + 1));
                Element::term(
                    BasisVector::t(GammaVector::half_steps(p2 + q2)),
                    &s * &half(p2 - q2),
                )
            }
        }
        // remaining orders via super-antisymmetry
        _ => {
            let flipped = literal_bracket(inst, y, x);
            if parity_product_odd {
                flipped
            } else {
                flipped.neg()
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn bracket_matches_the_literal_table(x in arb_twisted_bv(), y in arb_twisted_bv()) {
        let inst = AlgebraInstance::twisted();
        prop_assert_eq!(bracket_basis(&inst, &x, &y), literal_bracket(&inst, &x, &y));
    }

    #[test]
    fn twisted_antisymmetry_and_jacobi(x in arb_twisted_bv(), y in arb_twisted_bv(), z in arb_twisted_bv()) {
        let inst = AlgebraInstance::twisted();
        prop_assert!(antisymmetry_residual(&inst, &x, &y).is_zero());
        prop_assert!(jacobi_residual(&inst, &x, &y, &z).is_zero());
    }

    #[test]
    fn rank2_antisymmetry_and_jacobi(x in arb_rank2_bv(), y in arb_rank2_bv(), z in arb_rank2_bv()) {
        let inst = AlgebraInstance::rank_two();
        prop_assert!(antisymmetry_residual(&inst, &x, &y).is_zero());
        prop_assert!(jacobi_residual(&inst, &x, &y, &z).is_zero());
    }

    #[test]
    fn bracket_degree_and_parity_add(x in arb_twisted_bv(), y in arb_twisted_bv()) {
        let inst = AlgebraInstance::twisted();
        let br = bracket_basis(&inst, &x, &y);
        match br.degree_class() {
            Homogeneity::Zero => {}
            Homogeneity::Homogeneous(d) => {
                prop_assert_eq!(d, x.degree().add(&y.degree(), &inst));
            }
            Homogeneity::Mixed => prop_assert!(false, "bracket of basis vectors is homogeneous"),
        }
        match br.parity_class() {
            Homogeneity::Zero => {}
            Homogeneity::Homogeneous(p) => {
                prop_assert_eq!(p, x.parity().add(y.parity()));
            }
            Homogeneity::Mixed => prop_assert!(false, "bracket of basis vectors is homogeneous"),
        }
    }

    #[test]
    fn realize_is_additive_and_injective(x in arb_rank2_bv(), y in arb_rank2_bv()) {
        let inst = AlgebraInstance::rank_two();
        let (a, b) = (x.degree(), y.degree());
        let sum = a.add(&b, &inst);
        prop_assert_eq!(
            sum.realize(&inst),
            &a.realize(&inst) + &b.realize(&inst)
        );
        if a != b {
            prop_assert_ne!(a.realize(&inst), b.realize(&inst));
        }
    }

    #[test]
    fn twist_squares_to_identity(a in arb_twisted_bv(), b in arb_twisted_bv(), c in arb_rational_scalar()) {
        let t = Tensor2::term(a, b, c);
        prop_assert_eq!(super_twist(&super_twist(&t)), t);
    }

    #[test]
    fn cycle_cubes_to_identity(a in arb_twisted_bv(), b in arb_twisted_bv(), z in arb_twisted_bv()) {
        let mut t = Tensor3::zero();
        t.add_term(a, b, z, Scalar::from_int(3));
        prop_assert_eq!(super_cycle(&super_cycle(&super_cycle(&t))), t);
    }
}

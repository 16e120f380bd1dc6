use crformal::crmap::TransversalOrder;
use crformal::families;
use crformal::hypersurface::{Convention, NormalHypersurface, TypeKind};
use crformal::scalar;
use crformal::Series;

const D: u32 = 10;

#[test]
fn heisenberg_is_finite_type_class_c() {
    for conv in Convention::ALL {
        for n in 1..=2 {
            let m = families::heisenberg(n, D, conv).unwrap();
            assert!(m.validate().is_true());
            assert_eq!(m.classify_type().kind, TypeKind::Finite);
            assert!(m.is_class_c(D - 1, 1).unwrap().is_true());
        }
    }
}

#[test]
fn flat_hypersurface_is_never_certified_nondegenerate() {
    // degeneracy is a statement about all orders, so it stays undecided
    let m = NormalHypersurface::flat(1, D);
    let v = m.is_holomorphically_nondegenerate(D - 1, 1).unwrap();
    assert!(!v.is_certified());
}

#[test]
fn graph_round_trip() {
    let m = families::blowup_hypersurface(2, 3, D, Convention::TwoI).unwrap();
    let phi = m.graph().unwrap();
    let back = NormalHypersurface::from_graph(1, &phi, Convention::TwoI).unwrap();
    assert!(back.q().terms().eq(m.q().terms()));
}

#[test]
fn blowup_needs_perfect_square() {
    assert!(families::blowup_map(1, 2, D).is_err());
    assert!(families::hk_map(3, D).is_err());
    assert!(families::unscaled_blowup_map(1, 2, D).is_ok());
}

#[test]
fn blowup_maps_have_order_c() {
    for c in [1u32, 4] {
        let h = families::blowup_map(2, c, D).unwrap();
        assert_eq!(h.transversal_order().unwrap(), TransversalOrder::Finite(c));
    }
}

#[test]
fn unscaled_blowup_lands_in_scaled_heisenberg() {
    let m = families::blowup_hypersurface(2, 3, D, Convention::TwoI).unwrap();
    let target = families::scaled_heisenberg(3, D, Convention::TwoI).unwrap();
    let h = families::unscaled_blowup_map(2, 3, D).unwrap();
    assert!(h.sends_into(&m, &target).unwrap().is_true());
}

#[test]
fn exponential_model_types() {
    for k in 1..=3 {
        let m = families::exp_model(k, D).unwrap();
        assert_eq!(m.classify_type().kind, TypeKind::Infinite(1));
    }
}

#[test]
fn dilation_by_unit_modulus_preserves_exp_model() {
    let m = families::exp_model(2, D).unwrap();
    let h = families::dilation(scalar::imag_unit(), D);
    assert!(h.sends_into(&m, &m).unwrap().is_true());
    assert!(h.is_automorphism().is_true());
}

#[test]
fn remark_hypersurface_is_infinite_type() {
    let (m, target, h) = families::remark_instance(D, Convention::TwoI).unwrap();
    assert!(matches!(m.classify_type().kind, TypeKind::Infinite(_)));
    assert!(h.sends_into(&m, &target).unwrap().is_false());
}

#[test]
fn jacobian_is_multiplicative() {
    let a = families::blowup_map(1, 1, D).unwrap();
    let b = families::blowup_map(3, 4, D).unwrap();
    let ab = b.compose(&a).unwrap();
    let jb_at_a = b.jacobian().unwrap().compose(&a.components()).unwrap();
    let expected = &jb_at_a * &a.jacobian().unwrap();
    assert!(ab.jacobian().unwrap().terms().eq(expected.terms()));
}

#[test]
fn identity_is_transversal_automorphism() {
    let h = crformal::crmap::CrMap::identity(2, D);
    assert!(h.is_cr_transversal().is_true());
    assert!(h.is_automorphism().is_true());
    assert!(h.jacobian().unwrap().terms().eq(Series::one(3, D).terms()));
}

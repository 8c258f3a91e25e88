mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::*;
use period_lab::bdr_jet::{self, JetElement};
use period_lab::filtered_phi::{dim1_correspondence, is_admissible, AdmissibilityStatus, FilteredPhiModule};
use period_lab::newton_polygon as np;
use period_lab::padic_core::Prime;
use period_lab::ramification::{self as ram, PLFunction, RamificationData};
use period_lab::representations::CharacterTriple;
use period_lab::tilt::{self, GaloisElement, TiltExpr, TiltMonomial};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11])
}

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn ram_data() -> impl Strategy<Value = RamificationData> {
    (1u64..=3, prop::collection::vec(prop::sample::select(vec![1u64, 1, 2, 3]), 0..6)).prop_map(|(tail, mults)| {
        let mut orders = vec![tail];
        for m in mults {
            let last = *orders.last().unwrap();
            orders.push(last * m);
        }
        orders.reverse();
        RamificationData::new(orders[0], orders).unwrap()
    })
}

/// A p-adic unit (n, d) with p dividing neither.
fn unit(p: u64) -> impl Strategy<Value = Q> {
    (-60i64..=60, 1i64..=30)
        .prop_filter("unit", move |(n, d)| *n != 0 && n.rem_euclid(p as i64) != 0 && d % p as i64 != 0)
        .prop_map(|(n, d)| q(n, d))
}

fn galois(p: u64) -> impl Strategy<Value = GaloisElement> {
    (unit(p), -20i64..=20, 1i64..=9, -2i64..=2)
        .prop_filter("p-integral c", move |(_, _, d, _)| d % p as i64 != 0)
        .prop_map(move |(chi, n, d, f)| GaloisElement::new(chi, q(n, d), f, pr(p)).unwrap())
}

fn tilt_expr(p: u64) -> impl Strategy<Value = TiltExpr> {
    prop::collection::vec((-3i64..=3, 0i64..=9, 0u32..=2, 0i64..=4, 0u32..=1, 0i64..=1), 1..5).prop_map(
        move |terms| {
            let pp = pr(p);
            let mut x = TiltExpr::zero(pp);
            for (coeff, an, ak, cn, ck, i) in terms {
                let a = q(an, p.pow(ak) as i64);
                let c = q(cn, p.pow(ck) as i64);
                let m = TiltMonomial::new(a, c, TiltMonomial::one().u, pp).unwrap();
                x = x.add(&TiltExpr::monomial(pp, BigInt::from(coeff), m, i)).unwrap();
            }
            x
        },
    )
}

fn jet(p: u64, order: u32) -> impl Strategy<Value = JetElement> {
    prop::collection::vec((0u32..4, 0u32..4, -5i64..=5, 1i64..=4), 0..6).prop_map(move |terms| {
        JetElement::from_terms(
            pr(p),
            order,
            terms
                .into_iter()
                .filter(|(i, j, _, _)| i + j > 0)
                .map(|(i, j, n, d)| ((i, j), q(n, d))),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn herbrand_functions_are_inverse(d in ram_data(), n in 0i64..300, den in 1i64..30) {
        let x = q(n, den);
        let phi = ram::herbrand_phi(&d).unwrap();
        let psi = ram::herbrand_psi(&phi);
        prop_assert_eq!(psi.eval(&phi.eval(&x)), x.clone());
        prop_assert_eq!(phi.eval(&psi.eval(&x)), x);
        prop_assert!(phi.is_concave());
        prop_assert!(psi.is_convex());
    }

    #[test]
    fn tower_composition(a in ram_data(), b in ram_data(), n in 0i64..300, den in 1i64..30) {
        let x = q(n, den);
        let (pa, pb) = (ram::herbrand_phi(&a).unwrap(), ram::herbrand_phi(&b).unwrap());
        let c = ram::compose_towers(&pa, &pb);
        prop_assert_eq!(c.eval(&x), pa.eval(&pb.eval(&x)));
        let inv = c.inverse();
        prop_assert_eq!(inv.eval(&c.eval(&x)), x.clone());
        prop_assert_eq!(c.compose(&PLFunction::identity()).eval(&x), c.eval(&x));
    }

    #[test]
    fn psi_r_function_agrees(r in 1u32..8, p in prime(), n in 0i64..200, den in 1i64..10) {
        let u = q(n, den);
        prop_assert_eq!(ram::psi_r_function(r, pr(p)).eval(&u), ram::psi_r(r, &u, pr(p)));
    }

    #[test]
    fn galois_action_composes((x, g, h) in prime().prop_flat_map(|p| (tilt_expr(p), galois(p), galois(p)))) {
        prop_assert_eq!(tilt::galois_act(&g, &tilt::galois_act(&h, &x)), tilt::galois_act(&g.compose(&h), &x));
    }

    #[test]
    fn frobenius_is_a_ring_map(x in tilt_expr(3), y in tilt_expr(3), n in -2i64..=2) {
        let f = |z: &TiltExpr| tilt::frobenius(z, n);
        prop_assert_eq!(f(&x.add(&y).unwrap()), f(&x).add(&f(&y)).unwrap());
        prop_assert_eq!(f(&x.multiply(&y).unwrap()), f(&x).multiply(&f(&y)).unwrap());
        prop_assert_eq!(tilt::frobenius(&f(&x), -n), x);
    }

    #[test]
    fn kernel_of_theta_is_an_ideal(y in prime().prop_flat_map(tilt_expr)) {
        let w = tilt::omega(y.prime());
        prop_assert!(tilt::theta(&w.multiply(&y).unwrap(), 4).unwrap().is_zero());
        let e = tilt::epsilon_minus_one(y.prime());
        prop_assert!(tilt::theta(&e.multiply(&y).unwrap(), 4).unwrap().is_zero());
    }

    #[test]
    fn galois_preserves_kernel(g in galois(5)) {
        let w = tilt::omega(pr(5));
        prop_assert!(tilt::theta(&tilt::galois_act(&g, &w), 4).unwrap().is_zero());
    }

    #[test]
    fn tilt_json_round_trip(x in tilt_expr(5)) {
        let s = serde_json::to_string(&x).unwrap();
        let back: TiltExpr = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn jet_exp_log_inverse(x in jet(3, 5)) {
        prop_assert_eq!(bdr_jet::log1p(&bdr_jet::exp(&x).unwrap().sub(&JetElement::one(pr(3), 5).unwrap()).unwrap()).unwrap(), x.clone());
        let y = x.scale(&q(-1, 2));
        prop_assert_eq!(bdr_jet::exp(&x.add(&y).unwrap()).unwrap(), bdr_jet::exp(&x).unwrap().mul(&bdr_jet::exp(&y).unwrap()).unwrap());
    }

    #[test]
    fn jet_galois_composition_on_u(g in galois(5), h in galois(5), x in jet(5, 5)) {
        let only_u = JetElement::from_terms(pr(5), 5, x.terms().filter(|(m, _)| m.1 == 0).map(|(m, c)| (*m, c.clone()))).unwrap();
        let gh = bdr_jet::galois_act_jet(&g, &bdr_jet::galois_act_jet(&h, &only_u).unwrap()).unwrap();
        prop_assert_eq!(gh, bdr_jet::galois_act_jet(&g.compose(&h), &only_u).unwrap());
    }

    #[test]
    fn jet_json_round_trip(x in jet(7, 6)) {
        let s = serde_json::to_string(&x).unwrap();
        let back: JetElement = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn gr_generator(p in prime(), m in 1u32..6) {
        prop_assert!(bdr_jet::gr_generator_check(pr(p), m).unwrap());
    }

    #[test]
    fn dim1_admissible_iff_weights_match(p in odd_prime(), k in -4i64..=4, r in -4i64..=4, u in odd_prime().prop_flat_map(unit)) {
        prop_assume!(u.numer() % BigInt::from(p) != BigInt::from(0) && u.denom() % BigInt::from(p) != BigInt::from(0));
        let lambda = u * powq(p, k);
        let m = FilteredPhiModule::dim1(pr(p), lambda.clone(), r).unwrap();
        let v = is_admissible(&m);
        prop_assert_eq!(v.status == AdmissibilityStatus::Admissible, k == r);
        if k == r {
            let c = dim1_correspondence(pr(p), &lambda, r).unwrap();
            prop_assert!(c.classify().crystalline);
            prop_assert_eq!(c.classify().hodge_tate_weight, Some(qi(-r)));
        }
    }

    #[test]
    fn admissibility_ignores_basis(p in odd_prime(), r in -2i64..=1, gap in 1i64..=3, entries in prop::collection::vec(-3i64..=3, 4)) {
        let s = r + gap;
        let a = qi(1);
        let b = qi(p as i64 + 1);
        let m = FilteredPhiModule::dim2_normal_form(pr(p), r, s, a, b).unwrap();
        let sm = vec![vec![qi(entries[0]), qi(entries[1])], vec![qi(entries[2]), qi(entries[3])]];
        prop_assume!(rank(&sm) == 2);
        let m2 = m.change_basis(&sm).unwrap();
        prop_assert_eq!(is_admissible(&m).status, is_admissible(&m2).status);
        prop_assert_eq!(m2.hodge_number(), m.hodge_number());
        prop_assert_eq!(m2.newton_number(), m.newton_number());
    }

    #[test]
    fn dual_is_an_involution_on_numbers(p in odd_prime(), k in -3i64..=3, r in -3i64..=3) {
        let m = FilteredPhiModule::dim1(pr(p), powq(p, k), r).unwrap();
        let dd = m.dual().dual();
        prop_assert_eq!(dd.hodge_number(), m.hodge_number());
        prop_assert_eq!(dd.newton_number(), m.newton_number());
        let js = serde_json::to_string(&m).unwrap();
        let back: FilteredPhiModule = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), js);
        let sum = m.direct_sum(&m.dual()).unwrap();
        prop_assert_eq!(sum.hodge_number(), 0);
    }

    #[test]
    fn characters_form_a_group(p in odd_prime(), l1 in odd_prime().prop_flat_map(unit), a1 in -5i64..=5, b1 in 0i64..10, a2 in -5i64..=5, b2 in 0i64..10) {
        let mk = |l: Q, a: i64, b: i64| {
            let l = if l.numer() % BigInt::from(p) == BigInt::from(0) || l.denom() % BigInt::from(p) == BigInt::from(0) { qi(1) } else { l };
            CharacterTriple::new(pr(p), l, qi(a), b.rem_euclid(p as i64 - 1)).unwrap()
        };
        let x = mk(l1, a1, b1);
        let y = mk(qi(1), a2, b2);
        prop_assert_eq!(x.multiply(&y).unwrap(), y.multiply(&x).unwrap());
        prop_assert_eq!(x.multiply(&x.inverse()).unwrap(), CharacterTriple::trivial(pr(p)).unwrap());
        let f = x.classify();
        prop_assert!(!f.unramified || f.crystalline);
        prop_assert!(!(f.crystalline && f.cp_admissible) || f.unramified);
        prop_assert_eq!(f.hodge_tate_weight.clone(), Some(qi(a1)));
        let js = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<CharacterTriple>(&js).unwrap(), x);
    }

    #[test]
    fn frobenius_scales_polygons(p in prime(), n in -2i64..=2, w in 1i64..=5) {
        let poly = np::epsilon_minus_one_polygon(pr(p), &qi(w)).unwrap();
        let back = np::frobenius_transform(&np::frobenius_transform(&poly, n, pr(p)), -n, pr(p));
        prop_assert_eq!(back, poly.clone());
        let js = serde_json::to_string(&poly).unwrap();
        prop_assert_eq!(serde_json::from_str::<np::Polygon>(&js).unwrap(), poly);
    }
}

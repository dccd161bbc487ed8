use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use dessin_core::constructions::{
    build_example11, build_example13, build_example14, build_example4, build_example7, closure, example14_group,
    example6_triple, example9_triple, verify, Ex4Element, Example4Group, ExampleId, GOLDEN_IDS,
};
use dessin_core::group::GroupElement;
use dessin_core::linfp::{Example7Variant, MatGroupHandle, ProjElement, Mat2};
use dessin_core::triangle::{Construction, TriangleType, Verdict};
use dessin_core::Error;

#[test]
fn golden_manifest_ids_parse_and_round_trip() {
    for id in GOLDEN_IDS {
        let parsed: ExampleId = id.parse().unwrap();
        assert_eq!(parsed.to_string(), *id);
    }
}

#[test]
fn unknown_parameters_are_rejected() {
    assert!(matches!(verify("ex9:n=2"), Err(Error::UnknownExample(_))));
    assert!(matches!(verify("ex99"), Err(Error::UnknownExample(_))));
    assert!(verify("ex7:n=8,p=17,variant=sideways").is_err());
    assert!(verify("ex13:n=3,p=13,d=2").is_err());
}

#[test]
fn example4_reports_serialize() {
    let out = build_example4(5).unwrap();
    let v = serde_json::to_value(&out.report).unwrap();
    assert_eq!(v["dessins"][0]["walsh"], "2K_{5,5}");
    assert_eq!(v["dessins"][1]["walsh"], "5C_{10}");
    assert_eq!(v["center_meets_dihedral"], 1);
    let v = serde_json::to_value(&build_example4(6).unwrap().report).unwrap();
    assert_eq!(v["center_meets_dihedral"], 2);
    assert_eq!(v["zd_index"], 2);
}

#[test]
fn example6_products() {
    let t = example6_triple().unwrap();
    let xy2 = t.x.then(&t.y.pow(2));
    assert_eq!(xy2.to_string(), "(1,7,3,5,9)(2,8,4)");
    assert_eq!(t.ty, TriangleType::of(2, 6, 6));
}

#[test]
fn example9_y_cycles_for_several_k() {
    for k in 2..=4 {
        let t = example9_triple(k).unwrap();
        assert_eq!(t.y.cycle_type().parts(), &[6 * k, 4 * k, k, k, 1]);
        assert!(t.x.then(&t.y).then(&t.z).is_identity());
    }
}

#[test]
fn example7_other_parameters() {
    let r = build_example7(4, 17, Example7Variant::Swap, Some((3, 2, 3, 4)));
    assert!(r.is_err());
    let r = build_example7(4, 41, Example7Variant::Swap, None).unwrap();
    assert_eq!(r.construction, Construction::Cor52);
    assert_eq!(r.verdict, Verdict::Isomorphic);
    assert_eq!(r.types[0], TriangleType::of(4, 8, 8));
    assert!(build_example7(2, 13, Example7Variant::Swap, None).is_err());
}

#[test]
fn example11_and_13_alternatives() {
    let r = build_example11(2, 17, None).unwrap();
    assert_eq!(r.genus, BigInt::from(613));
    assert_eq!(r.verdict, Verdict::NotIsomorphic);
    let r = build_example13(3, 13, None).unwrap();
    assert_eq!(r.genus, BigInt::from(547));
    assert_eq!(r.group.order, BigUint::from(2184u32));
}

#[test]
fn example14_quotient_orders() {
    for d in [1u64, 2, 3, 6] {
        let r = build_example14(d).unwrap();
        assert_eq!(r.group.order, BigUint::from(24 * d));
        assert_eq!(r.dessins[0].order, BigUint::from(4 * d));
        assert_eq!(r.dessins[1].order, BigUint::from(4 * d));
    }
    assert!(matches!(build_example14(5), Err(Error::Precondition(_))));
    assert_eq!(example14_group(6).unwrap().degree(), 11);
}

fn arb_ex4() -> impl Strategy<Value = (u32, [(i64, i64, u8); 3])> {
    (3u32..9).prop_flat_map(|n| {
        let elem = (0..2 * n as i64, 0..n as i64, 0u8..2);
        (Just(n), [elem.clone(), elem.clone(), elem])
    })
}

proptest! {
    #[test]
    fn example4_multiplication_is_associative((n, es) in arb_ex4()) {
        let [a, b, c] = es.map(|(i, j, e)| Ex4Element::new(n, i, j, e));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
        prop_assert_eq!(2 * n as u64 % a.order(), 0);
    }

    #[test]
    fn example4_regular_action_is_faithful((n, es) in arb_ex4()) {
        let g = Example4Group::new(n).unwrap();
        let [a, b, _] = es.map(|(i, j, e)| Ex4Element::new(n, i, j, e));
        let pa = g.regular_permutation(&a);
        let pb = g.regular_permutation(&b);
        prop_assert_eq!(pa.then(&pb), g.regular_permutation(&a.mul(&b)));
        prop_assert_eq!(pa.order(), a.order());
    }

    #[test]
    fn projective_products_match_permutations(e in proptest::array::uniform8(0i64..13)) {
        let (Ok(m1), Ok(m2)) = (Mat2::new(13, [e[0], e[1], e[2], e[3]]), Mat2::new(13, [e[4], e[5], e[6], e[7]])) else {
            return Ok(());
        };
        let (a, b) = (ProjElement::from_mat(&m1), ProjElement::from_mat(&m2));
        prop_assert_eq!(a.mul(&b).to_perm(), a.to_perm().then(&b.to_perm()));
        let pgl = MatGroupHandle::pgl2(13).unwrap();
        prop_assert!(pgl.group().contains(&a.to_perm()));
    }
}

#[test]
fn closure_of_projective_generators() {
    let pgl = MatGroupHandle::pgl2(5).unwrap();
    let elems = closure(pgl.group().identity(), pgl.group().generators());
    assert_eq!(elems.len(), 120);
}

use nct_core::ncat::fun_enum;
use nct_core::ncat::gaunt::is_gaunt;
use nct_core::ncat::limits::product;
use nct_core::ncat::standard::{cell, suspension};
use nct_core::ncat::validate;
use nct_core::symmetry::retracts_of;
use nct_core::theta::{
    delta_n_mor, grid_retract, multi_hom, realize, theta_compose, theta_enumerate_objects, theta_hom, MultiIndex,
    MultiMor, ThetaMor,
};
use nct_core::verifier::corpus_generate;
use nct_core::{Budget, Ctx, NCat};
use proptest::prelude::*;
use proptest::sample::Index;

fn random_objects(n: usize, seed: u64) -> Vec<NCat> {
    corpus_generate(n, seed, 6, 0)
        .unwrap()
        .into_iter()
        .filter(|s| s.name.starts_with("random"))
        .map(|s| s.object)
        .collect()
}

#[test]
fn random_objects_are_produced() {
    assert!((0..8).all(|seed| !random_objects(2, seed).is_empty()));
}

fn flips(bits: u8, n: usize) -> Vec<bool> {
    (0..n).map(|i| bits >> i & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructors_stay_valid(n in 1usize..=3, seed in any::<u64>(), bits in any::<u8>()) {
        let c1 = cell(1, n).unwrap();
        for x in random_objects(n, seed) {
            prop_assert!(validate(&x).is_valid());
            prop_assert!(validate(&x.opposite_r(&flips(bits, n))).is_valid());
            prop_assert!(validate(&product(&x, &c1).unwrap().object).is_valid());
            if x.top_dim() < n {
                prop_assert!(validate(&suspension(&x).unwrap()).is_valid());
            }
        }
    }

    #[test]
    fn functors_from_the_point_are_objects(n in 1usize..=3, seed in any::<u64>()) {
        let point = cell(0, n).unwrap();
        for x in random_objects(n, seed) {
            prop_assert_eq!(fun_enum(&point, &x, &Budget::default()).unwrap().len(), x.objects().len());
        }
    }

    #[test]
    fn dualities_form_a_group(n in 1usize..=3, seed in any::<u64>(), i in any::<u8>(), j in any::<u8>()) {
        let (fi, fj) = (flips(i, n), flips(j, n));
        let xor: Vec<bool> = fi.iter().zip(&fj).map(|(a, b)| a ^ b).collect();
        for x in random_objects(n, seed) {
            prop_assert_eq!(x.opposite_r(&fi).opposite_r(&fj), x.opposite_r(&xor));
            prop_assert_eq!(x.opposite_r(&fi).opposite_r(&fi), x.clone());
        }
    }

    #[test]
    fn gaunt_criteria_agree(n in 1usize..=3, seed in any::<u64>()) {
        let ctx = Ctx::default();
        for x in random_objects(n, seed) {
            prop_assert!(is_gaunt(&x, &ctx).unwrap().criteria_agree);
        }
    }

    #[test]
    fn retract_certificates_recompose(n in 1usize..=2, seed in any::<u64>()) {
        let ctx = Ctx::default();
        for x in random_objects(n, seed) {
            let gaunt = is_gaunt(&x, &ctx).unwrap().gaunt;
            for r in retracts_of(&x, &ctx).unwrap() {
                prop_assert!(r.verify().unwrap());
                if gaunt {
                    prop_assert!(is_gaunt(&r.object, &ctx).unwrap().gaunt);
                }
            }
        }
    }

    #[test]
    fn theta_category_laws(n in 1usize..=3, a in any::<Index>(), b in any::<Index>(), c in any::<Index>(),
                           f in any::<Index>(), g in any::<Index>(), h in any::<Index>()) {
        let objs = theta_enumerate_objects(n, 4);
        let (a, b, c) = (a.get(&objs), b.get(&objs), c.get(&objs));
        let ab = theta_hom(a, b, 1 << 20).unwrap();
        let bc = theta_hom(b, c, 1 << 20).unwrap();
        let ca = theta_hom(c, a, 1 << 20).unwrap();
        prop_assume!(!ab.is_empty() && !bc.is_empty() && !ca.is_empty());
        let (f, g, h) = (f.get(&ab), g.get(&bc), h.get(&ca));
        prop_assert_eq!(&theta_compose(&ThetaMor::identity(b), f).unwrap(), f);
        prop_assert_eq!(&theta_compose(f, &ThetaMor::identity(a)).unwrap(), f);
        let left = theta_compose(h, &theta_compose(g, f).unwrap()).unwrap();
        let right = theta_compose(&theta_compose(h, g).unwrap(), f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn realization_is_fully_faithful(n in 1usize..=2, a in any::<Index>(), b in any::<Index>()) {
        let objs = theta_enumerate_objects(n, 4);
        let (a, b) = (a.get(&objs), b.get(&objs));
        let homs = theta_hom(a, b, 1 << 20).unwrap().len();
        let functors = fun_enum(&realize(a, n).unwrap(), &realize(b, n).unwrap(), &Budget::default()).unwrap().len();
        prop_assert_eq!(homs, functors);
    }

    #[test]
    fn grid_functor_preserves_composition(n in 1usize..=3, a in any::<Index>(), b in any::<Index>(), c in any::<Index>(),
                                          f in any::<Index>(), g in any::<Index>()) {
        let window = MultiIndex::window(n, 3);
        let (a, b, c) = (a.get(&window), b.get(&window), c.get(&window));
        let ab = multi_hom(a, b);
        let bc = multi_hom(b, c);
        prop_assume!(!ab.is_empty() && !bc.is_empty());
        let (f, g) = (f.get(&ab), g.get(&bc));
        prop_assert!(delta_n_mor(&MultiMor::identity(a)).is_identity());
        let composite = delta_n_mor(&g.after(f).unwrap());
        prop_assert_eq!(composite, theta_compose(&delta_n_mor(g), &delta_n_mor(f)).unwrap());
    }

    #[test]
    fn grid_retractions_split(n in 1usize..=3, o in any::<Index>()) {
        let objs = theta_enumerate_objects(n, 5);
        prop_assert!(grid_retract(o.get(&objs)).unwrap().verify().unwrap());
    }
}

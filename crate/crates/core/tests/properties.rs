use proptest::prelude::*;

use semibrick_core::gen::{random_acyclic_quiver, random_dim_vector, random_theta};
use semibrick_core::module::direct_sum_all;
use semibrick_core::{
    cokernel, decompose_indec, direct_sum, euler_form_mod, ext1_dim, hom_dim, iota, iota_inverse,
    is_brick, random_basis_change, random_module, sample_presentation, theta_value, FieldSpec,
    Matrix, RepModule,
};

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(65537), Just(2147483647)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(p in prime(), r in 0usize..6, c in 0usize..6, seed in any::<u64>()) {
        let f = FieldSpec::new(p).unwrap();
        let data = (0..r * c)
            .map(|k| semibrick_core::rng::counter_uniform(seed, 0, k as u64, p))
            .collect();
        let m = Matrix::from_flat(r, c, data);
        let ker = m.kernel(f);
        prop_assert_eq!(m.rank(f) + ker.len(), c);
        for v in &ker {
            prop_assert!(m.mul_vec(v, f).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(m.rank(f), m.transpose().rank(f));
    }

    #[test]
    fn inverse_is_two_sided(p in prime(), n in 0usize..6, seed in any::<u64>()) {
        let f = FieldSpec::new(p).unwrap();
        let data = (0..n * n)
            .map(|k| semibrick_core::rng::counter_uniform(seed, 1, k as u64, p))
            .collect();
        let m = Matrix::from_flat(n, n, data);
        match m.inverse(f) {
            Some(inv) => {
                prop_assert_eq!(m.mul(&inv, f), Matrix::identity(n));
                prop_assert_eq!(inv.mul(&m, f), Matrix::identity(n));
            }
            None => prop_assert!(m.rank(f) < n),
        }
    }

    #[test]
    fn euler_identity(seed in any::<u64>()) {
        let f = FieldSpec::default();
        let q = random_acyclic_quiver(seed, 5, 6);
        let m = random_module(&q, &random_dim_vector(&q, 4, seed ^ 1), f, seed ^ 2).unwrap();
        let n = random_module(&q, &random_dim_vector(&q, 4, seed ^ 3), f, seed ^ 4).unwrap();
        let lhs = hom_dim(&m, &n).unwrap() as i64 - ext1_dim(&m, &n).unwrap() as i64;
        prop_assert_eq!(lhs, euler_form_mod(&q, &m.dim().as_class(), &n.dim().as_class()));
    }

    #[test]
    fn orbit_invariance(seed in any::<u64>(), p in prime()) {
        let f = FieldSpec::new(p).unwrap();
        let q = random_acyclic_quiver(seed, 4, 5);
        let m = random_module(&q, &random_dim_vector(&q, 3, seed ^ 1), f, seed ^ 2).unwrap();
        let n = random_module(&q, &random_dim_vector(&q, 3, seed ^ 3), f, seed ^ 4).unwrap();
        let gm = random_basis_change(&m, seed ^ 5);
        let gn = random_basis_change(&n, seed ^ 6);
        prop_assert_eq!(hom_dim(&m, &n).unwrap(), hom_dim(&gm, &gn).unwrap());
        prop_assert_eq!(ext1_dim(&m, &n).unwrap(), ext1_dim(&gm, &gn).unwrap());
        prop_assert_eq!(is_brick(&m), is_brick(&gm));
    }

    #[test]
    fn hom_additivity(seed in any::<u64>()) {
        let f = FieldSpec::default();
        let q = random_acyclic_quiver(seed, 4, 5);
        let m1 = random_module(&q, &random_dim_vector(&q, 3, seed ^ 1), f, seed ^ 2).unwrap();
        let m2 = random_module(&q, &random_dim_vector(&q, 3, seed ^ 3), f, seed ^ 4).unwrap();
        let n = random_module(&q, &random_dim_vector(&q, 3, seed ^ 5), f, seed ^ 6).unwrap();
        let s = direct_sum(&m1, &m2).unwrap();
        prop_assert_eq!(hom_dim(&s, &n).unwrap(), hom_dim(&m1, &n).unwrap() + hom_dim(&m2, &n).unwrap());
        prop_assert_eq!(hom_dim(&n, &s).unwrap(), hom_dim(&n, &m1).unwrap() + hom_dim(&n, &m2).unwrap());
    }

    #[test]
    fn json_roundtrip(seed in any::<u64>(), p in prime()) {
        let f = FieldSpec::new(p).unwrap();
        let q = random_acyclic_quiver(seed, 5, 6);
        let m = random_module(&q, &random_dim_vector(&q, 3, seed ^ 1), f, seed ^ 2).unwrap();
        let text = m.to_json_string();
        let back = RepModule::from_json_str(&text, Some(q.clone())).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn iota_roundtrip(seed in any::<u64>()) {
        let q = random_acyclic_quiver(seed, 5, 6);
        let d = random_dim_vector(&q, 4, seed ^ 1);
        prop_assert_eq!(iota(&q, &iota_inverse(&q, &d).unwrap()).unwrap(), d.as_class());
    }

    #[test]
    fn decomposition_of_random_sums(seed in any::<u64>()) {
        let f = FieldSpec::default();
        let q = random_acyclic_quiver(seed, 4, 5);
        let parts: Vec<RepModule> = (0..3u64)
            .map(|i| random_module(&q, &random_dim_vector(&q, 2, seed ^ (10 + i)), f, seed ^ (20 + i)).unwrap())
            .collect();
        let m = random_basis_change(&direct_sum_all(&parts).unwrap(), seed ^ 7);
        let dec = decompose_indec(&m, seed, 24).unwrap();
        prop_assert!(dec.verify(&m));
        let total = dec.blocks.iter().fold(vec![0; q.num_vertices()], |acc, b| {
            acc.iter().zip(&b.dim().0).map(|(x, y)| x + y).collect()
        });
        prop_assert_eq!(&total, &m.dim().0);
        // never fewer summands than the generic parts contribute on their own
        let mut lower = 0;
        for p in &parts {
            lower += decompose_indec(p, seed ^ 9, 24).unwrap().blocks.len();
        }
        prop_assert_eq!(dec.blocks.len(), lower);
    }

    #[test]
    fn presentation_identities(seed in any::<u64>()) {
        let f = FieldSpec::default();
        let q = random_acyclic_quiver(seed, 4, 5);
        let theta = random_theta(&q, 2, seed ^ 1);
        let pres = sample_presentation(&q, &theta, f, seed ^ 2).unwrap();
        if pres.is_injective() {
            let c = cokernel(&pres).unwrap();
            prop_assert_eq!(c.dim().as_class(), iota(&q, &theta).unwrap());
            let m = random_module(&q, &random_dim_vector(&q, 3, seed ^ 3), f, seed ^ 4).unwrap();
            let rhs = hom_dim(&c, &m).unwrap() as i64 - ext1_dim(&c, &m).unwrap() as i64;
            prop_assert_eq!(theta_value(&theta, &m), rhs);
        }
    }
}

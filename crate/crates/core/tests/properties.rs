use std::sync::OnceLock;

use covgen::covariant::same_up_to_sign;
use covgen::enumerative::block_dims;
use covgen::poly::rat;
use covgen::search::Engine;
use covgen::{
    d1, dim_covariants, gaussian_binomial, kappa, kappa_inv, run_search, semitransvectant,
    semitransvectant_fast, transvectant, x_to_z, z_to_x, Covariant, Mode, Monomial, Poly,
    SearchConfig, SemiInvariant, VarSet, ZForm,
};
use num_bigint::BigInt;
use proptest::prelude::*;

mod common;
use common::{binomial, d1_nullity_oracle, partitions};

fn poly_strategy(vars: VarSet, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, n), -20i64..=20),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        Poly::from_terms(
            vars,
            terms
                .into_iter()
                .map(|(e, c)| (Monomial::from_exponents(e), rat(c))),
        )
    })
}

proptest! {
    #[test]
    fn text_round_trip(p in poly_strategy(VarSet::x(4), 3, 6)) {
        prop_assert_eq!(Poly::parse(VarSet::x(4), &p.to_text()).unwrap(), p);
    }

    #[test]
    fn ring_laws(a in poly_strategy(VarSet::x(3), 2, 4),
                 b in poly_strategy(VarSet::x(3), 2, 4),
                 c in poly_strategy(VarSet::x(3), 2, 4)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    /// Cayley coordinates and back.
    #[test]
    fn z_round_trip(p in poly_strategy(VarSet::z(5), 2, 5), s in 0u32..3) {
        let z = ZForm::new(p.mul_t_pow(3), s).unwrap();
        let x = z_to_x(&z).unwrap();
        prop_assert_eq!(x_to_z(&x).unwrap(), z);
    }

    #[test]
    fn gaussian_binomials_are_palindromic(d in 1u32..9, i in 1u32..7) {
        let g = gaussian_binomial(d, i);
        let c = g.coeffs();
        prop_assert_eq!(c.len() as u32, d * i + 1);
        prop_assert!(c.iter().eq(c.iter().rev()));
        let total: BigInt = c.iter().sum();
        prop_assert_eq!(total, binomial(d + i, i));
    }

    /// Block dimensions are differences of partition counts.
    #[test]
    fn blocks_match_partition_oracle(d in 1u32..8, i in 1u32..6) {
        let dims = block_dims(d, i);
        for (w, &n) in dims.iter().enumerate() {
            let w = w as u32;
            let prev = if w == 0 { 0 } else { partitions(w - 1, i, d) };
            prop_assert_eq!(n, partitions(w, i, d) - prev);
        }
    }
}

#[test]
fn dimensions_match_d1_nullity() {
    for d in 1..=4 {
        for i in 1..=5 {
            assert_eq!(dim_covariants(d, i), d1_nullity_oracle(d, i), "d = {d}, i = {i}");
        }
    }
}

/// Generators of the sextic through degree 3 and their pairwise products.
fn sample_pool() -> &'static [SemiInvariant] {
    static POOL: OnceLock<Vec<SemiInvariant>> = OnceLock::new();
    POOL.get_or_init(|| {
        let s = run_search(&SearchConfig::new(6, 3, Mode::Generic)).unwrap();
        let e = Engine::resume(SearchConfig::new(6, 3, Mode::Generic), &s).unwrap();
        let gens: Vec<SemiInvariant> = s
            .generators
            .iter()
            .map(|g| e.semi_invariant(&g.name).unwrap())
            .collect();
        let mut pool = gens.clone();
        for (a, f) in gens.iter().enumerate() {
            for g in &gens[a..] {
                if f.degree() + g.degree() <= 3 {
                    pool.push(f.mul(g));
                }
            }
        }
        pool
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The Cayley-coordinate route agrees with the definition, and the
    /// result has the expected order.
    #[test]
    fn fast_route_and_order_law(a in 0usize..64, b in 0usize..64, r in 0u32..13) {
        let pool = sample_pool();
        let f = &pool[a % pool.len()];
        let g = &pool[b % pool.len()];
        let r = r % (f.order().min(g.order()) + 1);
        let direct = semitransvectant(f, g, r).unwrap();
        let fast = semitransvectant_fast(f, g, r).unwrap();
        prop_assert!(same_up_to_sign(direct.as_ref(), fast.as_ref()));
        if let Some(s) = direct {
            prop_assert_eq!(s.order(), f.order() + g.order() - 2 * r);
            prop_assert_eq!(s.order(), 6 * s.degree() - 2 * s.weight());
        }
    }
}

#[test]
fn generators_are_kernel_elements_and_round_trip() {
    for (d, max) in [(5, 6), (6, 5), (8, 4)] {
        let s = run_search(&SearchConfig::new(d, max, Mode::Paper)).unwrap();
        let e = Engine::resume(SearchConfig::new(d, max, Mode::Paper), &s).unwrap();
        for g in &s.generators {
            let si = e.semi_invariant(&g.name).unwrap();
            assert!(d1(d).apply(si.xform()).unwrap().is_zero(), "{}", g.name);
            assert_eq!(g.order, d * g.degree - 2 * si.weight(), "{}", g.name);
            let c = kappa_inv(&si).unwrap();
            assert_eq!(c.order(), g.order);
            assert_eq!(kappa(&c).unwrap().xform(), si.xform(), "{}", g.name);
        }
    }
}

#[test]
fn odd_self_transvectants_vanish() {
    for d in 2..=8 {
        let f = Covariant::basic_form(d);
        for r in (1..=d).step_by(2) {
            assert!(transvectant(&f, &f, r).unwrap().is_zero(), "d = {d}, r = {r}");
        }
        let t = SemiInvariant::basic(d);
        for r in (1..=d).step_by(2) {
            assert!(semitransvectant(&t, &t, r).unwrap().is_none());
        }
    }
}

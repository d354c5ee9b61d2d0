use super::*;
use crate::linalg::{rank_exact, RankRoute};
use crate::covariant::semitransvectant_fast;
use crate::weitzenbock::is_semi_invariant;

fn run(d: u32, max: u32, mode: Mode) -> SearchState {
    run_search(&SearchConfig::new(d, max, mode)).unwrap()
}

fn total(s: &SearchState) -> u64 {
    s.deltas().iter().sum()
}

#[test]
fn octic_through_degree_five() {
    let s = run(8, 5, Mode::Paper);
    assert_eq!(s.deltas(), [1, 4, 8, 10, 11]);
    let dims: Vec<u64> = s.rows.iter().map(|r| r.dims.dim_s).collect();
    assert_eq!(dims, [0, 0, 0, 0, 3]);
    assert!(s.rows.iter().all(|r| r.syzygies == Certainty::Exact));
    let names: Vec<&str> = s.generators_of_degree(2).map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["dv1", "dv2", "dv3", "dv4"]);
}

#[test]
fn classical_counts_in_generic_mode() {
    // c1 = 0 beyond the form itself, c2 = 2, c3 = 4, c4 = 5
    for (d, max, want) in [(1, 4, 1), (2, 6, 2), (3, 8, 4), (4, 8, 5)] {
        let mut cfg = SearchConfig::new(d, max, Mode::Generic);
        cfg.verify_completeness = true;
        let s = run_search(&cfg).unwrap();
        assert_eq!(total(&s), want, "d = {d}");
        assert!(s.completeness.iter().all(|r| r.dims.delta == 0));
        assert!(s.generators.iter().skip(1).all(|g| g.name.starts_with('g')));
    }
}

#[test]
fn modes_agree_on_counts() {
    let p = run(8, 5, Mode::Paper);
    let g = run(8, 5, Mode::Generic);
    assert_eq!(p.rows, g.rows);
    let mut po: Vec<(u32, u32)> = p.generators.iter().map(|r| (r.degree, r.order)).collect();
    let mut go: Vec<(u32, u32)> = g.generators.iter().map(|r| (r.degree, r.order)).collect();
    po.sort_unstable();
    go.sort_unstable();
    assert_eq!(po, go);
}

#[test]
fn generators_are_semi_invariants_with_consistent_grading() {
    let s = run(8, 4, Mode::Paper);
    let e = Engine::resume(SearchConfig::new(8, 4, Mode::Paper), &s).unwrap();
    for g in &s.generators {
        let z = ZForm::from_json(8, &g.zform).unwrap();
        let (deg, wt) = zform_grading(&z).unwrap();
        assert_eq!(deg, g.degree);
        assert_eq!(g.order, 8 * deg - 2 * wt, "{}", g.name);
        assert!(is_semi_invariant(&e.generator_xform(&g.name).unwrap()).unwrap());
    }
}

#[test]
fn degree_two_xforms() {
    let s = run(8, 2, Mode::Paper);
    let e = Engine::resume(SearchConfig::new(8, 2, Mode::Paper), &s).unwrap();
    let dv4 = e.generator_xform("dv4").unwrap();
    let want = Poly::parse(crate::poly::VarSet::x(8), "-8*x1*x7 + x8*t + 28*x2*x6 - 56*x3*x5 + 35*x4^2").unwrap();
    assert_eq!(dv4, want);
    let orders: Vec<u32> = s.generators_of_degree(2).map(|g| g.order).collect();
    assert_eq!(orders, [12, 8, 4, 0]);
}

#[test]
fn degree_five_products_have_exact_rank_62() {
    let s = run(8, 5, Mode::Paper);
    let e = Engine::resume(SearchConfig::new(8, 5, Mode::Paper), &s).unwrap();
    let products = e.enumerate_products(5).unwrap();
    assert_eq!(products.len(), 65);
    let polys: Vec<Poly> = products.iter().map(|p| e.product_xform(p).unwrap()).collect();
    let mut cols = BTreeMap::new();
    for p in &polys {
        for (m, _) in p.terms() {
            let n = cols.len();
            cols.entry(m.clone()).or_insert(n);
        }
    }
    let rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![Rational::from_integer(0.into()); cols.len()];
            for (m, c) in p.terms() {
                row[cols[m]] = c.clone();
            }
            row
        })
        .collect();
    let r = rank_exact(&rows);
    assert_eq!(r.rank, 62);
    assert!(matches!(r.route, RankRoute::Certified | RankRoute::Bareiss));
}

#[test]
fn syzygy_basis_matches_row() {
    let s = run(8, 6, Mode::Paper);
    let e = Engine::resume(SearchConfig::new(8, 6, Mode::Paper), &s).unwrap();
    for i in [5, 6] {
        let b = e.syzygy_space(i).unwrap();
        assert_eq!(b.dim() as u64, s.rows[i as usize - 1].dims.dim_s);
    }
}

#[test]
fn resumed_run_equals_direct_run() {
    let direct = run(8, 6, Mode::Paper);
    let partial = run(8, 4, Mode::Paper);
    let saved = SearchState::from_json(&partial.to_json().unwrap()).unwrap();
    let resumed = resume_search(&SearchConfig::new(8, 6, Mode::Paper), &saved).unwrap();
    assert_eq!(resumed.to_json().unwrap(), direct.to_json().unwrap());
}

#[test]
fn thread_count_does_not_change_the_result() {
    let mut a = SearchConfig::new(6, 8, Mode::Generic);
    a.threads = Some(1);
    let mut b = a.clone();
    b.threads = Some(4);
    let sa = run_search(&a).unwrap().to_json().unwrap();
    let sb = run_search(&b).unwrap().to_json().unwrap();
    assert_eq!(sa, sb);
}

#[test]
fn resume_rejects_tampered_states() {
    let s = run(8, 3, Mode::Paper);
    let cfg = SearchConfig::new(8, 4, Mode::Paper);

    let mut bad = s.clone();
    let g = bad.generators.iter_mut().find(|g| g.name == "tr3").unwrap();
    let other = s.generator("tr5").unwrap().zform.clone();
    g.zform = other;
    assert!(Engine::resume(cfg.clone(), &bad).is_err());

    let mut bad = s.clone();
    bad.schema = "covgen/0".into();
    assert!(matches!(Engine::resume(cfg.clone(), &bad), Err(Error::Checkpoint(_))));

    let mut bad = s.clone();
    bad.generators[3].recipe = Recipe::with_form(&["nope"], 2);
    assert!(Engine::resume(cfg.clone(), &bad).is_err());

    assert!(Engine::resume(SearchConfig::new(7, 4, Mode::Paper), &s).is_err());
    assert!(Engine::resume(SearchConfig::new(8, 4, Mode::Generic), &s).is_err());
}

#[test]
fn candidate_pool_is_sorted_and_graded() {
    let s = run(8, 4, Mode::Paper);
    let e = Engine::resume(SearchConfig::new(8, 4, Mode::Paper), &s).unwrap();
    let pool = e.candidate_semitransvectants(5, false).unwrap();
    assert!(pool.windows(2).all(|w| w[0].r <= w[1].r));
    for c in &pool {
        assert_eq!(c.product.degree, 4);
        assert_eq!(c.order + 2 * c.weight, 8 * 5);
        assert!(c.r <= c.product.order.min(8));
    }
    // single generators start at r = 1
    assert!(pool.iter().any(|c| c.product.factors.len() == 1 && c.r == 1));
    assert!(e.candidate_semitransvectants(7, false).is_err());
}

#[test]
fn recipes_reproduce_stored_forms() {
    let s = run(8, 5, Mode::Paper);
    let e = Engine::resume(SearchConfig::new(8, 5, Mode::Paper), &s).unwrap();
    let t = SemiInvariant::basic(8);
    for g in s.generators.iter().filter(|g| g.degree >= 2) {
        let Recipe::Semitransvectant { right, r, .. } = &g.recipe else {
            panic!("{} has recipe {}", g.name, g.recipe);
        };
        let w = right
            .references()
            .iter()
            .map(|n| e.semi_invariant(n).unwrap())
            .reduce(|a, b| a.mul(&b))
            .unwrap();
        let fast = semitransvectant_fast(&t, &w, *r).unwrap().unwrap();
        assert_eq!(fast.zform(), e.generator_zform(&g.name).unwrap(), "{}", g.name);
    }
}

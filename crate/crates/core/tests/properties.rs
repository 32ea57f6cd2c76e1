//! Property tests: the exact engine against independent oracles.

mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use common::*;
use drg_core::algebra::FieldElement;
use drg_core::enumerate::candidates;
use drg_core::graphs::{
    distances, image_diameter, is_homomorphism, numeric_idempotents, recognize_drg, search_hom, search_retraction,
    verify_identities, Graph, GraphFormat, HomOutcome, PhiAnalyzer, SearchOptions, VertexMap,
};
use drg_core::homtheory::{search_triples, HomError};
use drg_core::params::{
    derive_parameters, screen_spectrum, sign_change_count, IntersectionArray, ParamError, ParameterSet, SpectralData,
};
use proptest::prelude::*;
use proptest::sample::Index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pool(d: usize, b0: u64) -> &'static [IntersectionArray] {
    static POOLS: OnceLock<Vec<Vec<IntersectionArray>>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| {
        let mut v = Vec::new();
        for b in 3..=16 {
            v.push(candidates(3, b));
        }
        for b in 3..=8 {
            v.push(candidates(4, b));
        }
        v
    });
    let slot = if d == 3 { (b0 - 3) as usize } else { 14 + (b0 - 3) as usize };
    &pools[slot]
}

fn diameter3() -> impl Strategy<Value = IntersectionArray> {
    (3u64..=16, any::<Index>()).prop_map(|(b0, i)| {
        let p = pool(3, b0);
        p[i.index(p.len())].clone()
    })
}

fn diameter3_or_4() -> impl Strategy<Value = IntersectionArray> {
    prop_oneof![
        diameter3(),
        (3u64..=8, any::<Index>()).prop_map(|(b0, i)| {
            let p = pool(4, b0);
            p[i.index(p.len())].clone()
        })
    ]
}

fn error_kind(e: &ParamError) -> &'static str {
    match e {
        ParamError::EigenvalueCount { .. } => "count",
        ParamError::NonIntegralMultiplicity { .. } => "multiplicity",
        _ => "other",
    }
}

fn spectral_laws(ps: &ParameterSet, sd: &SpectralData) {
    let d = ps.diameter();
    assert_eq!(sd.m.iter().sum::<u64>(), ps.n);
    for j in 0..=d {
        let row: Vec<FieldElement> = (0..=d).map(|r| sd.cosine(r, j)).collect();
        assert_eq!(sign_change_count(&row), j, "{} row {j}", ps.array);
        let theta = FieldElement::generator(sd.context(j));
        let lhs = theta.add_rational(&drg_core::algebra::int(-(ps.a[d] as i64))).try_mul(&row[d]).unwrap();
        let rhs = row[d - 1].scale(&drg_core::algebra::int(ps.c(d) as i64));
        assert!(lhs.equals(&rhs).unwrap(), "{} terminal identity, j = {j}", ps.array);
    }
}

fn exact_triples(ps: &ParameterSet, sd: &SpectralData) -> Option<Vec<(u64, u64, u64)>> {
    match search_triples(ps, sd, 2) {
        Ok(ws) => Some(ws.iter().map(|w| w.triple()).collect()),
        Err(HomError::SignStructure { .. }) => None,
        Err(e) => panic!("{}: {e}", ps.array),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn array_text_round_trips(arr in diameter3_or_4()) {
        let back: IntersectionArray = arr.to_string().parse().unwrap();
        prop_assert_eq!(back, arr);
    }

    #[test]
    fn screening_agrees_with_full_spectrum(arr in diameter3_or_4()) {
        let Ok(ps) = derive_parameters(&arr) else { return Ok(()) };
        let screened = screen_spectrum(&ps);
        let full = SpectralData::compute(&ps);
        match (&screened, &full) {
            (Ok(()), Ok(sd)) => spectral_laws(&ps, sd),
            (Err(a), Err(b)) => prop_assert_eq!(error_kind(a), error_kind(b), "{}: {} vs {}", arr, a, b),
            _ => prop_assert!(false, "{}: screen {:?}, full {:?}", arr, screened, full.map(|sd| sd.m)),
        }
    }

    #[test]
    fn interval_rechecker_agrees(arr in diameter3()) {
        let Ok(ps) = derive_parameters(&arr) else { return Ok(()) };
        let Ok(sd) = SpectralData::compute(&ps) else { return Ok(()) };
        let (b, c) = parse_array(&arr.to_string());
        prop_assert_eq!(recheck_triples(&b, &c), exact_triples(&ps, &sd), "{}", arr);
    }
}

#[test]
fn rechecker_agrees_on_every_table_row() {
    for &(_, _, s, _) in WITH_TRIPLES.iter().filter(|r| r.2 != NON_INTEGRAL) {
        let ps = derive_parameters(&s.parse().unwrap()).unwrap();
        let sd = SpectralData::compute(&ps).unwrap();
        let (b, c) = parse_array(s);
        assert_eq!(recheck_triples(&b, &c), exact_triples(&ps, &sd), "{s}");
    }
}

/// Distance-regular graphs with a known construction.
fn known_drgs() -> Vec<&'static str> {
    vec![
        "cycle(5)",
        "cycle(6)",
        "cycle(7)",
        "cycle(10)",
        "petersen",
        "kneser(7,3)",
        "kneser(9,4)",
        "hamming(2,3)",
        "hamming(3,2)",
        "hamming(3,3)",
        "hamming(4,2)",
        "hamming(2,4)",
        "hamming(3,4)",
        "complete-bipartite(4,4)",
    ]
}

#[test]
fn parameters_match_the_graphs() {
    for name in known_drgs() {
        let g = named(name);
        let arr = recognize_drg(&g).unwrap().unwrap_or_else(|| panic!("{name} not recognised"));
        let ps = derive_parameters(&arr).unwrap();
        let dd = distances(&g);
        let d = ps.diameter();
        assert_eq!(ps.n as usize, g.n(), "{name}");
        for i in 0..=d {
            assert_eq!(ps.k[i] as usize, dd.layer(0, i).len(), "{name} k_{i}");
        }
        // p_{ij}^h counted directly for one pair at each distance
        for h in 0..=d {
            let v = dd.layer(0, h)[0];
            for i in 0..=d {
                for j in 0..=d {
                    let count = (0..g.n()).filter(|&x| dd.get(0, x) == i && dd.get(v, x) == j).count();
                    assert_eq!(ps.p(i, j, h) as usize, count, "{name} p_{i}{j}^{h}");
                }
            }
        }
        let sd = SpectralData::compute(&ps).unwrap();
        let ns = numeric_idempotents(&g).unwrap();
        let m: Vec<u64> = ns.multiplicities.iter().map(|&x| x as u64).collect();
        assert_eq!(m, sd.m, "{name}");
        for j in 0..=d {
            assert!((ns.eigenvalues[j] - sd.theta_f64(j)).abs() < 1e-9, "{name} θ_{j}");
        }
        if let Some(res) = ns.cosine_residual {
            assert!(res < 1e-9, "{name} cosine residual {res}");
        }
        spectral_laws(&ps, &sd);
    }
}

fn graph_from_bits(n: usize, bits: u64) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits >> k & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn brute_force_hom(x: &Graph, y: &Graph, fixed: &[(usize, usize)]) -> bool {
    let (n, m) = (x.n(), y.n());
    let total = (m as u64).pow(n as u32);
    (0..total).any(|mut code| {
        let image: Vec<usize> = (0..n)
            .map(|_| {
                let v = (code % m as u64) as usize;
                code /= m as u64;
                v
            })
            .collect();
        fixed.iter().all(|&(u, v)| image[u] == v) && is_homomorphism(x, y, &VertexMap { image })
    })
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, bits)| graph_from_bits(n, bits))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hom_search_matches_brute_force(x in small_graph(7), y in small_graph(4), pin in any::<Option<(Index, Index)>>()) {
        let fixed: Vec<(usize, usize)> = pin.map(|(u, v)| (u.index(x.n()), v.index(y.n()))).into_iter().collect();
        let opts = SearchOptions { fixed: fixed.clone(), ..Default::default() };
        let expected = brute_force_hom(&x, &y, &fixed);
        match search_hom(&x, &y, &opts).unwrap() {
            HomOutcome::Found(phi) => {
                prop_assert!(expected);
                prop_assert!(is_homomorphism(&x, &y, &phi));
                prop_assert!(fixed.iter().all(|&(u, v)| phi.apply(u) == v));
            }
            HomOutcome::None => prop_assert!(!expected),
            HomOutcome::Unknown => prop_assert!(false, "no time limit was set"),
        }
    }

    #[test]
    fn graph6_and_edge_lists_round_trip(n in 0usize..80, density in 0.0f64..1.0, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(density)).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        prop_assert_eq!(&Graph::parse(&g.to_graph6(), GraphFormat::Graph6).unwrap(), &g);
        prop_assert_eq!(&Graph::parse(&g.to_edge_list(), GraphFormat::EdgeList).unwrap(), &g);
    }
}

fn face_retraction(h: &Graph) -> VertexMap {
    match search_retraction(h, &(0..9).collect::<Vec<_>>(), None).unwrap() {
        HomOutcome::Found(phi) => phi,
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn automorphisms_fix_every_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (name, sigma) in [
            ("petersen", petersen_automorphism(&mut rng)),
            ("cycle(5)", pentagon_automorphism(&mut rng)),
            ("hamming(3,3)", hamming33_automorphism(&mut rng)),
        ] {
            let g = named(name);
            let rep = verify_identities(&g, &g, &sigma).unwrap();
            prop_assert!(rep.passed, "{}", name);
            for c in &rep.checks {
                prop_assert!(c.distance_from_idempotent <= 1e-10, "{} r={} {}", name, c.r, c.distance_from_idempotent);
            }
        }
    }

    /// Conjugating the face retraction by symmetries keeps an endomorphism
    /// whose geodetic distance-2 partitions are admissible triples.
    #[test]
    fn twisted_retractions_give_admissible_triples(seed in any::<u64>()) {
        let h = named("hamming(3,3)");
        let face = face_retraction(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = hamming33_automorphism(&mut rng).then(&face).then(&hamming33_automorphism(&mut rng));
        prop_assert!(is_homomorphism(&h, &h, &psi));
        prop_assert_eq!(image_diameter(&h, &psi).unwrap(), Some(2));
        prop_assert!(verify_identities(&h, &h, &psi).unwrap().passed);

        let ps = derive_parameters(&"{6,4,2;1,2,3}".parse().unwrap()).unwrap();
        let sd = SpectralData::compute(&ps).unwrap();
        let admissible: BTreeSet<(usize, usize, usize)> = search_triples(&ps, &sd, 2)
            .unwrap()
            .iter()
            .map(|w| (w.alpha as usize, w.beta as usize, w.gamma as usize))
            .collect();
        let an = PhiAnalyzer::new(&h, &psi).unwrap();
        for p in an.all_geodetic(usize::MAX).into_iter().filter(|p| p.e == 2) {
            prop_assert!(admissible.contains(&p.triple()), "({}, {}): {:?}", p.u, p.v, p.triple());
            prop_assert!(p.residual.abs() < 1e-9);
        }
    }
}

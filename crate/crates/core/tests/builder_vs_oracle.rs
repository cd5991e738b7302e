use graphcode::oracle::{are_isomorphic, module_from_graphcode, module_from_presentation};
use graphcode::present::{presentation_from_graphcode, roundtrip_check};
use graphcode::random::{random_presentation, random_strict_graphcode, rng_from_seed, PresentationShape};
use graphcode::{build_graphcode, build_graphcode_with_stats, label_isomorphic, reduce_slice, BuildMode};

#[test]
fn graphcode_module_matches_cokernel() {
    let shape = PresentationShape {
        max_generators: 6,
        max_relations: 8,
        m: 5,
        n: 5,
        density: 50,
    };
    let mut rng = rng_from_seed(1);
    for case in 0..300 {
        let p = random_presentation(&mut rng, &shape);
        let expected = module_from_presentation(&p).unwrap();
        for mode in [BuildMode::Uncompressed, BuildMode::Compressed] {
            let (g, stats) = build_graphcode_with_stats(&p, mode);
            g.validate().unwrap();
            if mode == BuildMode::Uncompressed {
                assert!(g.is_strict(), "case {case}");
            }
            let got = module_from_graphcode(&g).unwrap();
            assert_eq!(got.dimension_function(), expected.dimension_function(), "case {case} {mode:?}");
            assert_eq!(got.rank_invariant().unwrap(), expected.rank_invariant().unwrap(), "case {case} {mode:?}");
            if expected.total_dimension() <= 10 {
                assert!(are_isomorphic(&got, &expected).unwrap(), "case {case} {mode:?}");
            }
            let (g_, r_) = (p.num_generators() as u64, p.num_relations() as u64);
            assert!(stats.column_additions <= 4 * (g_ + r_) * (g_ + r_));
        }
    }
}

#[test]
fn batch_bars_match_slice_reduction() {
    let mut rng = rng_from_seed(2);
    for _ in 0..200 {
        let p = random_presentation(&mut rng, &PresentationShape::default());
        let g = build_graphcode(&p, BuildMode::Uncompressed);
        for h in 1..=p.n() {
            let mut from_batch: Vec<_> = g.vertices().iter().filter(|b| b.height == h).copied().collect();
            from_batch.sort_by(graphcode::bar_order);
            assert_eq!(from_batch, reduce_slice(&p, h).bars);
        }
    }
}

#[test]
fn compressed_and_uncompressed_agree_after_compression() {
    let mut rng = rng_from_seed(3);
    for case in 0..300 {
        let p = random_presentation(&mut rng, &PresentationShape::default());
        let u = build_graphcode(&p, BuildMode::Uncompressed);
        let c = build_graphcode(&p, BuildMode::Compressed);
        assert!(c.num_vertices() + c.num_edges() <= u.num_vertices() + u.num_edges());
        assert!(label_isomorphic(&u.compress(), &c.compress()), "case {case}");
        assert!(label_isomorphic(&c.expand(), &u), "case {case}");
    }
}

#[test]
fn strict_graphcodes_survive_the_roundtrip() {
    let mut rng = rng_from_seed(4);
    for case in 0..500 {
        let g = random_strict_graphcode(&mut rng, 6, 5, 4, 50);
        assert!(roundtrip_check(&g), "case {case}: {g:?}\n{:?}", presentation_from_graphcode(&g));
    }
}

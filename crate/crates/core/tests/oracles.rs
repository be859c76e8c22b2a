//! Independent recomputations checked against the library.

use std::collections::{BTreeSet, HashSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use proptest::prelude::*;
use sdbar::diagram::{InputCircle, StringDiagramType};
use sdbar::homology::{
    betti_from_ranks, homology_summary, invariant_factors, rank_rational, rational_boundary_ranks, Coeffs, Column,
    IntegerMatrix,
};
use sdbar::moduli::{enumerate_top_cells, faces, perfect_matchings, Subdivision};
use sdbar::{build_complex, OutputMarking, Signature};

/// Every assignment of chord ends to circles, every matching, every tuple of
/// marked edges; keep what validates with the right signature.
fn brute_force_top_cells(sig: Signature) -> BTreeSet<Vec<u8>> {
    let ends = 2 * sig.chords() as usize;
    let mut out = BTreeSet::new();
    for assign in (0..ends).map(|_| 0..sig.k).multi_cartesian_product() {
        let circles: Vec<InputCircle> = (0..sig.k)
            .map(|c| InputCircle {
                marked_vertex: None,
                vertex_cycle: (0..ends).filter(|&v| assign[v] == c).collect(),
            })
            .collect();
        if circles.iter().any(|c| c.vertex_cycle.is_empty()) {
            continue;
        }
        for m in perfect_matchings(ends) {
            let bare = StringDiagramType {
                circles: circles.clone(),
                vertices: (0..ends).map(|v| vec![v]).collect(),
                chord_matching: m,
                outputs: vec![],
            };
            let edges: Vec<_> = bare.output_edges().collect();
            for pick in edges.iter().permutations(sig.l) {
                let mut g = bare.clone();
                g.outputs = pick.into_iter().map(|&e| OutputMarking::InEdge(e)).collect();
                if g.is_valid() && g.diagram_signature().ok() == Some(sig) && g.dim() as i64 == sig.top_dimension() {
                    out.insert(g.canonical_key());
                }
            }
        }
    }
    out
}

const SMALL: [(usize, usize, usize); 6] = [(0, 2, 1), (0, 1, 2), (0, 3, 1), (0, 2, 2), (0, 1, 3), (1, 1, 1)];

#[test]
fn top_cells_match_brute_force() {
    for (g, k, l) in SMALL {
        let sig = Signature::new(g, k, l);
        let fast: BTreeSet<Vec<u8>> = enumerate_top_cells(sig).unwrap().iter().map(|t| t.canonical_key()).collect();
        assert_eq!(fast, brute_force_top_cells(sig), "{sig}");
    }
}

/// Closing the top cells under faces by search gives the same cells.
#[test]
fn face_closure_matches_build() {
    for (g, k, l) in SMALL {
        let sig = Signature::new(g, k, l);
        let cx = build_complex(sig).unwrap();
        let mut seen = HashSet::new();
        let mut queue: VecDeque<StringDiagramType> = enumerate_top_cells(sig).unwrap().into();
        while let Some(t) = queue.pop_front() {
            if !seen.insert(t.canonical_key()) {
                continue;
            }
            queue.extend(faces(&t).into_iter().map(|f| f.target));
        }
        let built: HashSet<Vec<u8>> = cx.cells.iter().map(|c| c.dtype.canonical_key()).collect();
        assert_eq!(seen, built, "{sig}");
    }
}

/// Smith normal form, rational elimination and column reduction agree on every
/// boundary map, and the subdivision agrees on the Betti numbers.
#[test]
fn rank_engines_agree_on_complexes() {
    for (g, k, l) in [(0, 2, 1), (0, 1, 2), (1, 1, 1), (0, 3, 1)] {
        let cx = build_complex(Signature::new(g, k, l)).unwrap();
        let mats = cx.boundary_matrices().unwrap();
        let f = cx.f_vector();
        let mut cols: Vec<Vec<Column>> = vec![vec![]; f.len()];
        for (m, a) in mats.iter().enumerate() {
            assert_eq!(rank_rational(a), invariant_factors(a).len());
            let mut c: Vec<Column> = vec![vec![]; a.cols];
            for (r, j, v) in &a.entries {
                c[*j].push((*r as u32, i64::try_from(v.clone()).unwrap()));
            }
            c.iter_mut().for_each(|x| x.sort_unstable());
            cols[m + 1] = c;
        }
        let rank = rational_boundary_ranks(f.len() - 1, |m| std::mem::take(&mut cols[m]));
        let q = homology_summary(&f, &mats, Coeffs::Q).unwrap().betti();
        assert_eq!(betti_from_ranks(&f, &rank), q);
        assert_eq!(Subdivision::new(&cx).unwrap().rational_betti().unwrap(), q);
    }
}

fn columns(rows: usize, cols: usize, data: &[i64]) -> (IntegerMatrix, Vec<Column>) {
    let m = IntegerMatrix::from_triplets(
        rows,
        cols,
        data.iter().enumerate().map(|(i, &x)| (i / cols, i % cols, BigInt::from(x))),
    );
    let c = (0..cols)
        .map(|j| (0..rows).filter(|&i| data[i * cols + j] != 0).map(|i| (i as u32, data[i * cols + j])).collect())
        .collect();
    (m, c)
}

proptest! {
    #[test]
    fn reduction_rank_matches_elimination(
        (r, c, data) in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(prop_oneof![4 => Just(0i64), 1 => -3i64..=3], r * c))
        })
    ) {
        let (m, cols) = columns(r, c, &data);
        let mut once = Some(cols);
        let rank = rational_boundary_ranks(1, |_| once.take().unwrap_or_default());
        prop_assert_eq!(rank[1], rank_rational(&m));
    }

    #[test]
    fn reduction_survives_large_entries(k in 20u32..40) {
        let big = 1i64 << k;
        let (m, cols) = columns(3, 3, &[big, big - 1, 1, big + 1, big, 1, 2 * big + 1, 2 * big - 1, 2]);
        let mut once = Some(cols);
        let rank = rational_boundary_ranks(1, |_| once.take().unwrap_or_default());
        prop_assert_eq!(rank[1], rank_rational(&m));
    }
}

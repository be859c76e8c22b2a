//! Fatgraphs in half-edge form.
//!
//! A fatgraph on half-edges `0..n` is a fixed-point-free involution `pairing`
//! (its orbits are the edges) together with a permutation `next` whose orbits
//! are the vertices; `next` gives the cyclic order of half-edges around each
//! vertex. A half-edge stands for the edge oriented away from its vertex.
//!
//! Boundary cycles are the orbits of `σ = next ∘ pairing`: leave along a
//! half-edge, arrive at the far end, turn to the next half-edge there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fatgraph {
    pub pairing: Vec<usize>,
    pub next: Vec<usize>,
}

/// `(genus, boundary count, euler characteristic)` of the ribbon surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceType {
    pub genus: usize,
    pub boundaries: usize,
    pub euler: i64,
}

impl Fatgraph {
    pub fn new(pairing: Vec<usize>, next: Vec<usize>) -> Result<Self> {
        let fg = Fatgraph { pairing, next };
        fg.check()?;
        Ok(fg)
    }

    pub fn num_half_edges(&self) -> usize {
        self.pairing.len()
    }

    pub fn check(&self) -> Result<()> {
        let n = self.pairing.len();
        if self.next.len() != n {
            return Err(Error::MalformedGraph(format!(
                "pairing has {} entries but next has {}",
                n,
                self.next.len()
            )));
        }
        for (h, &p) in self.pairing.iter().enumerate() {
            if p >= n {
                return Err(Error::MalformedGraph(format!("pairing[{h}] = {p} out of range")));
            }
            if p == h {
                return Err(Error::MalformedGraph(format!("half-edge {h} is paired with itself")));
            }
            if self.pairing[p] != h {
                return Err(Error::MalformedGraph(format!("pairing is not an involution at {h}")));
            }
        }
        let mut seen = vec![false; n];
        for (h, &q) in self.next.iter().enumerate() {
            if q >= n {
                return Err(Error::MalformedGraph(format!("next[{h}] = {q} out of range")));
            }
            if seen[q] {
                return Err(Error::MalformedGraph(format!("next is not a permutation ({q} hit twice)")));
            }
            seen[q] = true;
        }
        Ok(())
    }

    /// The boundary permutation `σ(h) = next(pairing(h))`.
    pub fn sigma(&self, h: usize) -> usize {
        self.next[self.pairing[h]]
    }

    fn orbits(&self, step: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
        let n = self.num_half_edges();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                cyc.push(h);
                h = step(h);
            }
            out.push(cyc);
        }
        out
    }

    /// Vertices as cyclic lists of half-edges, least half-edge first.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        self.orbits(|h| self.next[h])
    }

    pub fn num_edges(&self) -> usize {
        self.num_half_edges() / 2
    }

    /// Orbits of `σ`, each rotated to start at its least half-edge, sorted
    /// by that half-edge.
    pub fn boundary_cycles(&self) -> Result<Vec<Vec<usize>>> {
        self.check()?;
        // Scanning starts in increasing order, so every orbit is reached first
        // at its minimum and the list comes out sorted.
        Ok(self.orbits(|h| self.sigma(h)))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_half_edges();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(h) = stack.pop() {
            for nb in [self.pairing[h], self.next[h]] {
                if !seen[nb] {
                    seen[nb] = true;
                    count += 1;
                    stack.push(nb);
                }
            }
        }
        count == n
    }

    pub fn surface_type(&self) -> Result<SurfaceType> {
        self.check()?;
        if !self.is_connected() {
            return Err(Error::Domain("surface type of a disconnected fatgraph".into()));
        }
        let v = self.vertices().len() as i64;
        let e = self.num_edges() as i64;
        let euler = v - e;
        let boundaries = self.boundary_cycles()?.len();
        let twice_genus = 2 - euler - boundaries as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::MalformedGraph(format!(
                "2 - χ - n = {twice_genus} is not a nonnegative even number"
            )));
        }
        Ok(SurfaceType {
            genus: (twice_genus / 2) as usize,
            boundaries,
            euler,
        })
    }

    /// Renames half-edge `h` to `perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> Fatgraph {
        let n = self.num_half_edges();
        let mut pairing = vec![0; n];
        let mut next = vec![0; n];
        for h in 0..n {
            pairing[perm[h]] = perm[self.pairing[h]];
            next[perm[h]] = perm[self.next[h]];
        }
        Fatgraph { pairing, next }
    }

    pub fn disjoint_union(&self, other: &Fatgraph) -> Fatgraph {
        let off = self.num_half_edges();
        let mut pairing = self.pairing.clone();
        let mut next = self.next.clone();
        pairing.extend(other.pairing.iter().map(|h| h + off));
        next.extend(other.next.iter().map(|h| h + off));
        Fatgraph { pairing, next }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let fg: Fatgraph = serde_json::from_str(s)?;
        fg.check()?;
        Ok(fg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fatgraph serializes")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn circle() -> Fatgraph {
        Fatgraph::new(vec![1, 0], vec![1, 0]).unwrap()
    }

    /// One vertex, loops `a` (half-edges 0,1) and `b` (2,3), cyclic order
    /// given as a list of half-edges.
    pub fn figure_eight(order: [usize; 4]) -> Fatgraph {
        let mut next = vec![0; 4];
        for i in 0..4 {
            next[order[i]] = order[(i + 1) % 4];
        }
        Fatgraph::new(vec![1, 0, 3, 2], next).unwrap()
    }

    /// Orbits of `σ` traced by hand, independent of `orbits`.
    fn brute_cycles(fg: &Fatgraph) -> Vec<Vec<usize>> {
        let n = fg.num_half_edges();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for h in 0..n {
            if cycles.iter().any(|c| c.contains(&h)) {
                continue;
            }
            let mut c = vec![h];
            let mut x = fg.next[fg.pairing[h]];
            while x != h {
                c.push(x);
                x = fg.next[fg.pairing[x]];
            }
            cycles.push(c);
        }
        cycles
    }

    #[test]
    fn circle_is_an_annulus() {
        let fg = circle();
        assert_eq!(fg.boundary_cycles().unwrap(), vec![vec![0], vec![1]]);
        assert!(fg.is_connected());
        let st = fg.surface_type().unwrap();
        assert_eq!((st.genus, st.boundaries, st.euler), (0, 2, 0));
    }

    #[test]
    fn separated_figure_eight() {
        // a a̅ b b̅
        let fg = figure_eight([0, 1, 2, 3]);
        assert_eq!(brute_cycles(&fg).len(), 3);
        assert_eq!(fg.boundary_cycles().unwrap().len(), 3);
        let st = fg.surface_type().unwrap();
        assert_eq!((st.genus, st.boundaries, st.euler), (0, 3, -1));
    }

    #[test]
    fn interleaved_figure_eight_is_a_punctured_torus() {
        // a b a̅ b̅
        let fg = figure_eight([0, 2, 1, 3]);
        assert_eq!(brute_cycles(&fg).len(), 1);
        assert_eq!(fg.boundary_cycles().unwrap(), vec![vec![0, 3, 1, 2]]);
        let st = fg.surface_type().unwrap();
        assert_eq!((st.genus, st.boundaries, st.euler), (1, 1, -1));
    }

    #[test]
    fn disjoint_circles_are_disconnected() {
        let fg = circle().disjoint_union(&circle());
        assert!(!fg.is_connected());
        assert!(matches!(fg.surface_type(), Err(Error::Domain(_))));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(Fatgraph::new(vec![0, 1], vec![1, 0]).is_err());
        assert!(Fatgraph::new(vec![1, 0], vec![0, 0]).is_err());
        assert!(Fatgraph::new(vec![1, 2, 0], vec![1, 2, 0]).is_err());
        assert!(Fatgraph::new(vec![1, 0], vec![1]).is_err());
        assert!(Fatgraph::from_json(r#"{"pairing":[1,0],"next":[5,0]}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let fg = figure_eight([0, 2, 1, 3]);
        assert_eq!(Fatgraph::from_json(&fg.to_json()).unwrap(), fg);
    }

    fn arb_fatgraph() -> impl Strategy<Value = Fatgraph> {
        (1usize..6).prop_flat_map(|edges| {
            let n = 2 * edges;
            (Just(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(n, mate, cyc)| {
            // pair consecutive entries of a shuffled list; read `next` as a permutation
            let mut pairing = vec![0; n];
            for c in mate.chunks(2) {
                pairing[c[0]] = c[1];
                pairing[c[1]] = c[0];
            }
            Fatgraph { pairing, next: cyc }
        })
    }

    proptest! {
        #[test]
        fn cycle_lengths_cover_half_edges(fg in arb_fatgraph()) {
            let cycles = fg.boundary_cycles().unwrap();
            let total: usize = cycles.iter().map(Vec::len).sum();
            prop_assert_eq!(total, fg.num_half_edges());
            prop_assert_eq!(cycles.len(), brute_cycles(&fg).len());
            for c in &cycles {
                prop_assert_eq!(c[0], *c.iter().min().unwrap());
            }
        }

        #[test]
        fn surface_type_ignores_labels(fg in arb_fatgraph(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..fg.num_half_edges()).collect();
            perm.shuffle(&mut rng);
            let other = fg.relabel(&perm);
            prop_assert_eq!(fg.is_connected(), other.is_connected());
            if fg.is_connected() {
                prop_assert_eq!(fg.surface_type().unwrap(), other.surface_type().unwrap());
            }
        }
    }
}

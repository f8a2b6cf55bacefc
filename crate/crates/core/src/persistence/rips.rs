//! Vietoris–Rips persistent homology over Z2.
//!
//! Persistent cohomology in increasing dimension with the clearing
//! optimization and implicitly enumerated coboundaries. Dimension 0 is
//! handled by union-find. Simplices are ordered by diameter, ties broken by
//! dimension and then by reverse combinatorial index; the diagram as a
//! multiset does not depend on the tie-break since zero-length bars are
//! dropped.
//!
//! Simplices are identified by their combinatorial index: a simplex with
//! vertices `v_0 > v_1 > ... > v_d` has index `sum_i C(v_i, d+1-i)`.

use super::{FiltrationInput, IntervalConvention, PersistenceDiagram, PersistenceError};
use crate::embedding::DistanceMatrix;
use rayon::slice::ParallelSliceMut;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Rips persistence diagrams for dimensions `0..=max_dimension`.
///
/// Bars are half-open `[birth, death)`; one infinite bar per connected
/// component at the chosen threshold appears in dimension 0.
pub fn rips_persistence(input: &FiltrationInput) -> Result<Vec<PersistenceDiagram>, PersistenceError> {
    let dist = &input.distances;
    let n = dist.len();
    if n == 0 {
        return Err(PersistenceError::EmptyInput);
    }
    if dist.lower_triangle().iter().any(|&d| d < 0.0 || !d.is_finite()) {
        return Err(PersistenceError::NotADistanceMatrix(
            "negative or non-finite entries".into(),
        ));
    }
    let threshold = input.threshold.unwrap_or_else(|| dist.enclosing_radius());
    let engine = Engine { dist, n, threshold, binomial: binomial_table(n, input.max_dimension + 2) };
    Ok(engine.run(input.max_dimension))
}

/// Filtration position of a simplex within one dimension: smaller diameter
/// first, ties broken by larger index first.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    diam: f64,
    idx: u64,
}

// distances are validated finite, so total_cmp-based ordering is total
impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.diam
            .total_cmp(&other.diam)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn binomial_table(n: usize, k_max: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; k_max + 1]; n + 1];
    for row in b.iter_mut() {
        row[0] = 1;
    }
    for v in 1..=n {
        for k in 1..=k_max {
            b[v][k] = b[v - 1][k - 1] + b[v - 1][k];
        }
    }
    b
}

/// Open-addressing map from simplex index to column position.
struct PivotMap {
    mask: usize,
    keys: Vec<u64>,
    vals: Vec<u32>,
    len: usize,
}

const EMPTY_KEY: u64 = u64::MAX;

impl PivotMap {
    fn with_capacity(n: usize) -> Self {
        let slots = ((n.max(8) * 5) / 3).next_power_of_two();
        PivotMap { mask: slots - 1, keys: vec![EMPTY_KEY; slots], vals: vec![0; slots], len: 0 }
    }

    #[inline]
    fn slot(&self, key: u64) -> usize {
        (key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 32) as usize & self.mask
    }

    fn insert(&mut self, key: u64, val: u32) {
        debug_assert!(self.len < self.keys.len());
        let mut s = self.slot(key);
        loop {
            if self.keys[s] == EMPTY_KEY {
                self.keys[s] = key;
                self.vals[s] = val;
                self.len += 1;
                return;
            }
            debug_assert_ne!(self.keys[s], key, "pivot inserted twice");
            s = (s + 1) & self.mask;
        }
    }

    #[inline]
    fn get(&self, key: u64) -> Option<u32> {
        let mut s = self.slot(key);
        loop {
            let k = self.keys[s];
            if k == key {
                return Some(self.vals[s]);
            }
            if k == EMPTY_KEY {
                return None;
            }
            s = (s + 1) & self.mask;
        }
    }

    #[inline]
    fn contains(&self, key: u64) -> bool {
        self.get(key).is_some()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

struct Engine<'a> {
    dist: &'a DistanceMatrix,
    n: usize,
    threshold: f64,
    binomial: Vec<Vec<u64>>,
}

impl<'a> Engine<'a> {
    #[inline]
    fn binom(&self, v: usize, k: usize) -> u64 {
        self.binomial[v][k]
    }

    /// Decodes a simplex index into descending vertices.
    fn vertices_of(&self, mut idx: u64, dim: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut upper = self.n;
        for k in (1..=dim + 1).rev() {
            // largest v < upper with C(v, k) <= idx
            let mut lo = k - 1;
            let mut hi = upper;
            while lo + 1 < hi {
                let mid = (lo + hi) / 2;
                if self.binom(mid, k) <= idx {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(lo);
            idx -= self.binom(lo, k);
            upper = lo;
        }
    }

    fn edge_entries(&self) -> Vec<Entry> {
        let mut edges = Vec::new();
        for i in 1..self.n {
            for j in 0..i {
                let d = self.dist.get(i, j);
                if d <= self.threshold {
                    let idx = self.binom(i, 2) + self.binom(j, 1);
                    edges.push(Entry { diam: d, idx });
                }
            }
        }
        edges
    }

    /// All `dim`-simplices with diameter <= threshold, skipping indices that
    /// appear in `cleared`.
    fn assemble_columns(&self, dim: usize, cleared: &PivotMap) -> Vec<Entry> {
        let mut cols = Vec::new();
        if dim == 2 {
            for v2 in 2..self.n {
                let base2 = self.binom(v2, 3);
                for v1 in 1..v2 {
                    let d21 = self.dist.get(v2, v1);
                    if d21 > self.threshold {
                        continue;
                    }
                    let base1 = base2 + self.binom(v1, 2);
                    for v0 in 0..v1 {
                        let diam = d21.max(self.dist.get(v2, v0)).max(self.dist.get(v1, v0));
                        if diam <= self.threshold {
                            let idx = base1 + v0 as u64;
                            if !cleared.contains(idx) {
                                cols.push(Entry { diam, idx });
                            }
                        }
                    }
                }
            }
        } else {
            let mut vertices = Vec::with_capacity(dim + 1);
            self.assemble_rec(dim, self.n, 0.0, 0, &mut vertices, cleared, &mut cols);
        }
        cols.par_sort_unstable_by(|a, b| b.diam.total_cmp(&a.diam).then(a.idx.cmp(&b.idx)));
        cols
    }

    fn assemble_rec(
        &self,
        dim: usize,
        upper: usize,
        diam: f64,
        idx: u64,
        vertices: &mut Vec<usize>,
        cleared: &PivotMap,
        cols: &mut Vec<Entry>,
    ) {
        let remaining = dim + 1 - vertices.len();
        if remaining == 0 {
            if !cleared.contains(idx) {
                cols.push(Entry { diam, idx });
            }
            return;
        }
        for v in (remaining - 1..upper).rev() {
            let mut d = diam;
            for &w in vertices.iter() {
                d = d.max(self.dist.get(w, v));
            }
            if d > self.threshold {
                continue;
            }
            vertices.push(v);
            self.assemble_rec(dim, v, d, idx + self.binom(v, remaining), vertices, cleared, cols);
            vertices.pop();
        }
    }

    /// Pushes every cofacet (diam <= threshold) of the simplex with the given
    /// descending `vertices` and index `idx` through `emit`, in decreasing
    /// cofacet-index order (the filtration-minimal equal-diameter cofacet
    /// comes first). Returning `false` from `emit` stops the enumeration.
    fn for_each_cofacet(
        &self,
        vertices: &[usize],
        idx: u64,
        diam: f64,
        mut emit: impl FnMut(Entry) -> bool,
    ) {
        let dim = vertices.len() - 1;
        let mut above: u64 = 0;
        let mut below: u64 = idx;
        let mut j = 0usize; // vertices[..j] are > v
        for v in (0..self.n).rev() {
            if j < vertices.len() && v == vertices[j] {
                let pos = j; // vertex position in the new simplex above
                above += self.binom(vertices[j], dim + 2 - pos);
                below -= self.binom(vertices[j], dim + 1 - pos);
                j += 1;
                continue;
            }
            let mut cof_diam = diam;
            for &w in vertices {
                cof_diam = cof_diam.max(self.dist.get(w, v));
            }
            if cof_diam > self.threshold {
                continue;
            }
            let cof_idx = above + self.binom(v, dim + 2 - j) + below;
            if !emit(Entry { diam: cof_diam, idx: cof_idx }) {
                return;
            }
        }
    }

    fn run(&self, max_dim: usize) -> Vec<PersistenceDiagram> {
        let mut diagrams = Vec::with_capacity(max_dim + 1);

        // Dimension 0: Kruskal over the edges in filtration order.
        let mut edges = self.edge_entries();
        edges.par_sort_unstable_by(|a, b| a.cmp(b));
        let mut uf = UnionFind::new(self.n);
        let mut h0: Vec<(f64, f64)> = Vec::new();
        let mut merged = vec![false; edges.len()];
        let mut scratch = Vec::new();
        for (e, entry) in edges.iter().enumerate() {
            self.vertices_of(entry.idx, 1, &mut scratch);
            let (a, b) = (scratch[0], scratch[1]);
            if uf.union(a, b) {
                merged[e] = true;
                if entry.diam > 0.0 {
                    h0.push((0.0, entry.diam));
                }
            }
        }
        let components = (0..self.n).filter(|&i| uf.find(i) == i).count();
        h0.extend(std::iter::repeat((0.0, f64::INFINITY)).take(components));
        diagrams.push(
            PersistenceDiagram::new(0, IntervalConvention::HalfOpen, h0)
                .expect("H0 bars are valid"),
        );
        if max_dim == 0 {
            return diagrams;
        }

        // Columns for dimension 1: the non-merging edges (clearing).
        let mut columns: Vec<Entry> = edges
            .iter()
            .zip(&merged)
            .filter(|(_, &m)| !m)
            .map(|(e, _)| *e)
            .collect();
        columns.par_sort_unstable_by(|a, b| b.diam.total_cmp(&a.diam).then(a.idx.cmp(&b.idx)));
        drop(edges);
        drop(merged);

        for dim in 1..=max_dim {
            let (diagram, pivots) = self.reduce_dimension(dim, &columns);
            diagrams.push(diagram);
            if dim < max_dim {
                columns = self.assemble_columns(dim + 1, &pivots);
            }
        }
        diagrams
    }

    /// Cohomology reduction of one dimension. Returns the diagram and the
    /// pivot map (keyed by (dim+1)-simplex index) used for clearing.
    fn reduce_dimension(&self, dim: usize, columns: &[Entry]) -> (PersistenceDiagram, PivotMap) {
        let mut pivots = PivotMap::with_capacity(columns.len());
        let mut v_extra: std::collections::HashMap<u32, Vec<u64>> = std::collections::HashMap::new();
        let mut pairs: Vec<(f64, f64)> = Vec::new();
        let mut vertices: Vec<usize> = Vec::new();
        let mut other_vertices: Vec<usize> = Vec::new();
        let mut cofacet_buf: Vec<Entry> = Vec::new();
        let mut heap: BinaryHeap<std::cmp::Reverse<Entry>> = BinaryHeap::new();

        'columns: for (pos, col) in columns.iter().enumerate() {
            self.vertices_of(col.idx, dim, &mut vertices);
            cofacet_buf.clear();
            // First pass: emergent-pair shortcut. The first cofacet with the
            // column's own diameter is the filtration-minimal one; if no other
            // column has claimed it, it is this column's final pivot.
            let mut emergent: Option<Entry> = None;
            let mut check_emergent = true;
            self.for_each_cofacet(&vertices, col.idx, col.diam, |cof| {
                if check_emergent && cof.diam == col.diam {
                    if !pivots.contains(cof.idx) {
                        emergent = Some(cof);
                        return false;
                    }
                    check_emergent = false;
                }
                cofacet_buf.push(cof);
                true
            });
            if let Some(p) = emergent {
                pivots.insert(p.idx, pos as u32);
                continue 'columns;
            }

            heap.clear();
            for &c in &cofacet_buf {
                heap.push(std::cmp::Reverse(c));
            }
            let mut v_cur: Vec<u64> = Vec::new();
            loop {
                let Some(pivot) = pop_pivot(&mut heap) else {
                    // fully cancelled: essential class in this dimension
                    pairs.push((col.diam, f64::INFINITY));
                    continue 'columns;
                };
                if let Some(owner) = pivots.get(pivot.idx) {
                    // add the owner's reduced column and keep looking
                    heap.push(std::cmp::Reverse(pivot));
                    let owner_col = columns[owner as usize];
                    v_cur.push(owner_col.idx);
                    self.vertices_of(owner_col.idx, dim, &mut other_vertices);
                    self.for_each_cofacet(&other_vertices, owner_col.idx, owner_col.diam, |cof| {
                        heap.push(std::cmp::Reverse(cof));
                        true
                    });
                    if let Some(extra) = v_extra.get(&owner) {
                        for &e in extra.clone().iter() {
                            v_cur.push(e);
                            let e_diam = self.simplex_diameter(e, dim, &mut other_vertices);
                            self.for_each_cofacet(&other_vertices, e, e_diam, |cof| {
                                heap.push(std::cmp::Reverse(cof));
                                true
                            });
                        }
                    }
                } else {
                    pivots.insert(pivot.idx, pos as u32);
                    if !v_cur.is_empty() {
                        v_cur.sort_unstable();
                        let compressed = cancel_mod2(&v_cur);
                        if !compressed.is_empty() {
                            v_extra.insert(pos as u32, compressed);
                        }
                    }
                    if pivot.diam > col.diam {
                        pairs.push((col.diam, pivot.diam));
                    }
                    continue 'columns;
                }
            }
        }

        let diagram = PersistenceDiagram::new(dim, IntervalConvention::HalfOpen, pairs)
            .expect("reduction emits valid bars");
        (diagram, pivots)
    }

    /// Diameter of a simplex given by index, also decoding its vertices.
    fn simplex_diameter(&self, idx: u64, dim: usize, vertices: &mut Vec<usize>) -> f64 {
        self.vertices_of(idx, dim, vertices);
        let mut d = 0.0f64;
        for i in 0..vertices.len() {
            for j in 0..i {
                d = d.max(self.dist.get(vertices[i], vertices[j]));
            }
        }
        d
    }
}

/// Pops the heap down to the filtration-minimal entry of the mod-2 column,
/// cancelling duplicate pairs.
fn pop_pivot(heap: &mut BinaryHeap<std::cmp::Reverse<Entry>>) -> Option<Entry> {
    while let Some(std::cmp::Reverse(top)) = heap.pop() {
        let mut count = 1usize;
        while let Some(&std::cmp::Reverse(next)) = heap.peek() {
            if next.idx == top.idx {
                heap.pop();
                count += 1;
            } else {
                break;
            }
        }
        if count % 2 == 1 {
            return Some(top);
        }
    }
    None
}

fn cancel_mod2(sorted: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(sorted[i]);
        }
        i = j;
    }
    out
}

//! Bottleneck distance between persistence diagrams.
//!
//! A delta-matching is a partial bijection where matched points move less
//! than delta in the sup metric and every unmatched point (x, y) has
//! y - x < 2 delta. The infimum over feasible delta is attained on the
//! finite set of pairwise sup-distances and half-persistences, so a binary
//! search over those candidates with a bipartite matching feasibility test
//! computes the distance exactly.

use super::{PersistenceDiagram, PersistenceError};

/// Bottleneck distance. Points with infinite death must match each other;
/// if the two diagrams have different numbers of them the distance is
/// infinite.
pub fn bottleneck_distance(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
) -> Result<f64, PersistenceError> {
    if d1.dimension() != d2.dimension() {
        return Err(PersistenceError::DimensionMismatch(d1.dimension(), d2.dimension()));
    }
    let (fin1, inf1) = split(d1);
    let (fin2, inf2) = split(d2);
    if inf1.len() != inf2.len() {
        return Ok(f64::INFINITY);
    }
    // Infinite-death points pair up by sorted birth.
    let mut c_inf = 0.0f64;
    for (a, b) in inf1.iter().zip(&inf2) {
        c_inf = c_inf.max((a - b).abs());
    }
    Ok(c_inf.max(finite_bottleneck(&fin1, &fin2)))
}

fn split(d: &PersistenceDiagram) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut fin = Vec::new();
    let mut inf = Vec::new();
    for &(b, dd) in d.pairs() {
        if dd.is_infinite() {
            inf.push(b);
        } else {
            fin.push((b, dd));
        }
    }
    inf.sort_by(f64::total_cmp);
    (fin, inf)
}

fn sup_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn half_persistence(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

fn finite_bottleneck(p1: &[(f64, f64)], p2: &[(f64, f64)]) -> f64 {
    if p1.is_empty() && p2.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = vec![0.0];
    for &a in p1 {
        candidates.push(half_persistence(a));
        for &b in p2 {
            candidates.push(sup_dist(a, b));
        }
    }
    for &b in p2 {
        candidates.push(half_persistence(b));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // smallest candidate admitting a feasible matching
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(feasible(p1, p2, candidates[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(p1, p2, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Is there a delta-matching with all costs <= delta? Bipartite graph with
/// one dedicated diagonal slot per point; diagonal slots interconnect freely.
fn feasible(p1: &[(f64, f64)], p2: &[(f64, f64)], delta: f64) -> bool {
    let (n1, n2) = (p1.len(), p2.len());
    let left = n1 + n2; // points of d1, then diagonal slots of d2's points
    let right = n2 + n1; // points of d2, then diagonal slots of d1's points
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); left];
    for (i, &a) in p1.iter().enumerate() {
        for (j, &b) in p2.iter().enumerate() {
            if sup_dist(a, b) <= delta {
                adj[i].push(j);
            }
        }
        if half_persistence(a) <= delta {
            adj[i].push(n2 + i);
        }
    }
    for (j, &b) in p2.iter().enumerate() {
        if half_persistence(b) <= delta {
            adj[n1 + j].push(j);
        }
        for i in 0..n1 {
            adj[n1 + j].push(n2 + i); // diagonal-to-diagonal, always allowed
        }
    }
    max_matching(&adj, right) == left
}

/// Hopcroft–Karp maximum matching size.
fn max_matching(adj: &[Vec<usize>], right: usize) -> usize {
    let left = adj.len();
    const NIL: usize = usize::MAX;
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0u32; left];
    let mut queue = std::collections::VecDeque::new();
    let mut result = 0usize;
    loop {
        // BFS layers from free left vertices
        queue.clear();
        const INF: u32 = u32::MAX;
        for u in 0..left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        fn dfs(
            u: usize,
            adj: &[Vec<usize>],
            dist: &mut [u32],
            match_l: &mut [usize],
            match_r: &mut [usize],
        ) -> bool {
            const NIL: usize = usize::MAX;
            const INF: u32 = u32::MAX;
            for k in 0..adj[u].len() {
                let v = adj[u][k];
                let w = match_r[v];
                if w == NIL || (dist[w] == dist[u] + 1 && dfs(w, adj, dist, match_l, match_r)) {
                    match_l[u] = v;
                    match_r[v] = u;
                    return true;
                }
            }
            dist[u] = INF;
            false
        }
        for u in 0..left {
            if match_l[u] == NIL && dfs(u, adj, &mut dist, &mut match_l, &mut match_r) {
                result += 1;
            }
        }
    }
    result
}

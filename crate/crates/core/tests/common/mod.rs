#![allow(dead_code)]

use orthocolor::graph::Graph;
use proptest::prelude::*;

/// Graph on `lo..=hi` vertices, each pair an edge with probability one half.
pub fn random_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for v in 1..n {
                for u in 0..v {
                    if bits[k] {
                        pairs.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, pairs).unwrap()
        })
    })
}

/// Smallest k admitting a proper k-coloring, by trying every assignment.
pub fn brute_chromatic_number(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    (1..=n)
        .find(|&k| {
            let mut colors = vec![0usize; n];
            loop {
                if g.edges().iter().all(|e| colors[e.u] != colors[e.v]) {
                    return true;
                }
                let mut i = 0;
                loop {
                    if i == n {
                        return false;
                    }
                    colors[i] += 1;
                    if colors[i] < k {
                        break;
                    }
                    colors[i] = 0;
                    i += 1;
                }
            }
        })
        .unwrap()
}

//! Uniform random labelled trees and their degree and distance laws.

use rand::Rng;

use crate::scalar::Scalar;
use crate::{domain_err, Result};

/// A labelled tree on vertices `0..m` (printed 1-based where relevant),
/// stored as an edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledTree {
    m: usize,
    edges: Vec<(u32, u32)>,
}

impl LabelledTree {
    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.m];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

/// Decode a Prüfer sequence over labels `0..m` (length m-2) into its tree.
/// Linear-time pointer scan.
pub fn prufer_decode(m: usize, seq: &[u32]) -> LabelledTree {
    assert!(m >= 2, "prufer_decode needs m >= 2");
    assert_eq!(seq.len(), m - 2);
    let mut degree = vec![1u32; m];
    for &s in seq {
        degree[s as usize] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    // `ptr` scans for the smallest leaf; `leaf` may run ahead of it.
    let mut ptr = 0usize;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &s in seq {
        edges.push((leaf as u32, s));
        degree[s as usize] -= 1;
        if degree[s as usize] == 1 && (s as usize) < ptr {
            leaf = s as usize;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf as u32, (m - 1) as u32));
    LabelledTree {
        m,
        edges,
    }
}

/// Encode a labelled tree as its Prüfer sequence (inverse of
/// `prufer_decode`).
pub fn prufer_encode(tree: &LabelledTree) -> Vec<u32> {
    let m = tree.m;
    if m <= 2 {
        return Vec::new();
    }
    let mut degree = vec![0u32; m];
    let adj = tree.adjacency();
    for (v, nbrs) in adj.iter().enumerate() {
        degree[v] = nbrs.len() as u32;
    }
    let mut removed = vec![false; m];
    let mut seq = Vec::with_capacity(m - 2);
    let mut ptr = 0usize;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for _ in 0..m - 2 {
        removed[leaf] = true;
        let parent = *adj[leaf]
            .iter()
            .find(|&&u| !removed[u as usize])
            .expect("leaf has a live neighbour");
        seq.push(parent);
        degree[parent as usize] -= 1;
        if degree[parent as usize] == 1 && (parent as usize) < ptr {
            leaf = parent as usize;
        } else {
            ptr += 1;
            while degree[ptr] != 1 || removed[ptr] {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    seq
}

/// Uniform labelled tree on `m` vertices via a uniform Prüfer sequence.
pub fn uniform_labelled_tree(m: usize, rng: &mut impl Rng) -> Result<LabelledTree> {
    if m == 0 {
        return domain_err("uniform_labelled_tree: m must be >= 1");
    }
    if m == 1 {
        return Ok(LabelledTree {
            m,
            edges: Vec::new(),
        });
    }
    let seq: Vec<u32> = (0..m - 2).map(|_| rng.gen_range(0..m as u32)).collect();
    Ok(prufer_decode(m, &seq))
}

/// Degree law of a fixed vertex in a uniform labelled tree on `m >= 2`
/// vertices: `1 + Binomial(m-2, 1/m)`, so
/// `P(k) = C(m-2, k-1) (1/m)^{k-1} (1-1/m)^{m-1-k}`.
pub fn root_degree_pmf<F: Scalar>(m: usize, k: usize) -> Result<F> {
    if m < 2 {
        return domain_err("root_degree_pmf: m must be >= 2");
    }
    if k < 1 || k > m - 1 {
        return Ok(F::zero()); // out-of-range degrees carry no mass
    }
    let p = F::one() / F::of(m as f64);
    let q = F::one() - p;
    // binomial pmf at k-1 of Bin(m-2, 1/m), in log space via ln Γ
    let n = F::of((m - 2) as f64);
    let j = F::of((k - 1) as f64);
    let ln_choose = crate::scalar::ln_gamma(n + F::one())
        - crate::scalar::ln_gamma(j + F::one())
        - crate::scalar::ln_gamma(n - j + F::one());
    Ok((ln_choose + j * p.ln() + (n - j) * q.ln()).exp())
}

/// Tail of the distance between two independent uniform vertices of a
/// uniform labelled tree: `P(d >= k) = ∏_{j=1..k} (m-j)/m`.
pub fn distance_tail<F: Scalar>(m: usize, k: usize) -> F {
    debug_assert!(m >= 2 && k >= 1);
    let mf = F::of(m as f64);
    let mut p = F::one();
    for j in 1..=k.min(m) {
        p = p * (mf - F::of(j as f64)) / mf;
    }
    if k >= m {
        F::zero()
    } else {
        p
    }
}

//! Lazy Poisson-weighted infinite tree, invasion percolation on it, the
//! forward-maximal weight chain, and the glued-components construction of
//! the invasion cluster.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::pgw::{GwNumerics, TruncatedSizeBiasedLaw};
use crate::random_trees::uniform_labelled_tree;
use crate::tree::RootedWeightedTree;
use crate::{domain_err, Result};

/// Trace of invasion percolation (Prim's algorithm) on the PWIT: vertices in
/// discovery order, parent links, and edge weights in invasion order.
///
/// Vertex `0` is the root; edge `i` (0-based) joins vertex `i + 1` to
/// `parent(i + 1)`.
#[derive(Debug, Clone)]
pub struct PrimRun {
    parent: Vec<u32>,
    edge_weights: Vec<f64>,
}

impl PrimRun {
    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Weights in invasion order, `W(e_1), W(e_2), ...`.
    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        (v != 0).then(|| self.parent[v as usize])
    }

    pub fn as_tree(&self) -> RootedWeightedTree {
        let mut t = RootedWeightedTree::new_root();
        for v in 1..self.parent.len() {
            let id = t.add_child(self.parent[v], self.edge_weights[v - 1]);
            debug_assert_eq!(id as usize, v);
        }
        t
    }

    /// Largest weight seen along the run.
    pub fn max_weight(&self) -> Option<f64> {
        self.edge_weights
            .iter()
            .copied()
            .fold(None, |acc: Option<f64>, w| {
                Some(acc.map_or(w, |a| a.max(w)))
            })
    }
}

// Min-heap key: nonnegative f64 bits order like the floats; ties broken by
// insertion counter so runs are deterministic.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct HeapKey {
    weight_bits: u64,
    counter: u32,
}

struct FrontierEdge {
    key: HeapKey,
    source: u32,
}

impl PartialEq for FrontierEdge {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for FrontierEdge {}
impl PartialOrd for FrontierEdge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FrontierEdge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.key.cmp(&self.key) // reversed: BinaryHeap is a max-heap
    }
}

/// Invasion percolation on the PWIT for `steps` vertices.
///
/// Each explored vertex lazily owns the next atom of its rate-one Poisson
/// process of child-edge weights: popping the cheapest frontier edge
/// materialises one new vertex, pushes the source's next atom and the new
/// vertex's first atom. The generated weights are exact samples of the PWIT
/// restricted to the explored region, so re-running with the same seed and a
/// larger `steps` extends the run without changing the prefix.
pub fn pwit_prim(steps: usize, rng: &mut impl Rng) -> PrimRun {
    assert!(steps >= 1, "pwit_prim needs at least one step");
    let mut parent = vec![0u32];
    let mut edge_weights = Vec::with_capacity(steps - 1);
    let mut heap = std::collections::BinaryHeap::with_capacity(steps + 1);
    let mut counter = 0u32;
    let mut push = |heap: &mut std::collections::BinaryHeap<FrontierEdge>,
                    counter: &mut u32,
                    source: u32,
                    weight: f64| {
        heap.push(FrontierEdge {
            key: HeapKey {
                weight_bits: weight.to_bits(),
                counter: *counter,
            },
            source,
        });
        *counter += 1;
    };
    let first: f64 = Exp1.sample(rng);
    push(&mut heap, &mut counter, 0, first);
    while parent.len() < steps {
        let edge = heap.pop().expect("frontier never empties");
        let w = f64::from_bits(edge.key.weight_bits);
        let v = parent.len() as u32;
        parent.push(edge.source);
        edge_weights.push(w);
        // next (heavier) child atom of the source
        let step: f64 = Exp1.sample(rng);
        push(&mut heap, &mut counter, edge.source, w + step);
        // first child atom of the new vertex
        let first: f64 = Exp1.sample(rng);
        push(&mut heap, &mut counter, v, first);
    }
    PrimRun {
        parent,
        edge_weights,
    }
}

/// Index of the last invasion edge with weight at least `z` (1-based), or 0
/// if every edge is lighter.
pub fn last_heavy_index(run: &PrimRun, z: f64) -> usize {
    run.edge_weights
        .iter()
        .rposition(|&w| w >= z)
        .map_or(0, |i| i + 1)
}

/// The forward-maximal chain `(X_i, Z_i)`: strictly decreasing backbone
/// weights in (1, ∞) with the component sizes between them.
#[derive(Debug, Clone)]
pub struct ForwardMaximalChain {
    entries: Vec<(f64, u64)>,
}

impl ForwardMaximalChain {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.entries[i].0
    }

    pub fn component_size(&self, i: usize) -> u64 {
        self.entries[i].1
    }

    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }
}

/// Sample `n_steps` of the forward-maximal chain.
///
/// `X_1 = θ⁻¹(U)`; thereafter `θ(X_{i+1}) = U_i · θ(X_i)` inverts the
/// conditional distribution function `θ(y)/θ(x)`. Component sizes are drawn
/// from the truncated size-biased law at the current weight.
///
/// Each size draw costs O(Z_i) and E[Z_i] grows like (X_i - 1)^{-2}, so deep
/// chains are expensive; callers that only need the weight marginal should
/// use [`forward_maximal_weights`].
pub fn forward_maximal_chain(
    gw: &GwNumerics<f64>,
    n_steps: usize,
    rng: &mut impl Rng,
) -> Result<ForwardMaximalChain> {
    if n_steps == 0 {
        return domain_err("forward_maximal_chain: n_steps must be >= 1");
    }
    let mut entries = Vec::with_capacity(n_steps);
    let mut survival: f64 = rng.sample(rand::distributions::Open01); // θ(X_1)
    for _ in 0..n_steps {
        let x = gw.theta_inv(survival)?;
        let z = TruncatedSizeBiasedLaw::sample_streaming(gw, x, rng)?;
        entries.push((x, z));
        let u: f64 = rng.sample(rand::distributions::Open01);
        survival *= u;
    }
    Ok(ForwardMaximalChain {
        entries,
    })
}

/// The weight marginal `(X_i)` of the forward-maximal chain, without
/// component sizes.
pub fn forward_maximal_weights(
    gw: &GwNumerics<f64>,
    n_steps: usize,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    if n_steps == 0 {
        return domain_err("forward_maximal_weights: n_steps must be >= 1");
    }
    let mut xs = Vec::with_capacity(n_steps);
    let mut survival: f64 = rng.sample(rand::distributions::Open01);
    for _ in 0..n_steps {
        xs.push(gw.theta_inv(survival)?);
        let u: f64 = rng.sample(rand::distributions::Open01);
        survival *= u;
    }
    Ok(xs)
}

/// Invasion cluster assembled from a forward-maximal chain: uniform labelled
/// components glued along uniformly chosen vertices, with the bridge between
/// component `i` and `i+1` carrying weight exactly `X_i`.
#[derive(Debug, Clone)]
pub struct BuiltCluster {
    pub tree: RootedWeightedTree,
    /// Backbone weight `X_i` of the component each vertex belongs to.
    pub activation: Vec<f64>,
    /// Component index of each vertex.
    pub component: Vec<u32>,
    /// Graph distance from the root to the glue vertex `R_i` of each
    /// component plus the bridge edge, cumulated; `backbone_dist[i]` is the
    /// distance from the root to `S_{i+1}`.
    pub backbone_dist: Vec<u32>,
    /// Number of components assembled.
    pub depth: usize,
}

impl BuiltCluster {
    /// Ball sizes around the root for r = 0..=r_max, with a truncation flag:
    /// `true` means the generated portion cannot certify the full ball.
    ///
    /// Completeness is certified from backbone distances: every vertex of
    /// component `i + 1` lies beyond `backbone_dist[i]`, so once the last
    /// backbone distance exceeds `r_max` the ball is exact.
    pub fn ball_profile(&self, r_max: u32) -> (Vec<usize>, bool) {
        let profile = self
            .tree
            .ball_profile(self.tree.root(), r_max)
            .expect("root is present");
        let certified = self
            .backbone_dist
            .last()
            .is_some_and(|&d| d > r_max);
        (profile, !certified)
    }
}

/// Concatenate the first `depth` components of a chain into the invasion
/// cluster. Within component `i`, edge weights are iid Uniform[0, X_i]; the
/// glue vertices are independent uniform vertices of the component.
pub fn build_cluster(
    chain: &ForwardMaximalChain,
    depth: usize,
    rng: &mut impl Rng,
) -> Result<BuiltCluster> {
    if depth == 0 || depth > chain.len() {
        return domain_err(format!(
            "build_cluster: depth {depth} outside 1..={}",
            chain.len()
        ));
    }
    let mut tree = RootedWeightedTree::new_root();
    let mut activation = vec![chain.weight(0)];
    let mut component = vec![0u32];
    let mut backbone_dist = Vec::with_capacity(depth);
    let mut dist_to_root = 0u32; // distance from global root to S_i
    let mut entry = 0u32; // global id of S_i
    for i in 0..depth {
        let (x, z) = chain.entries()[i];
        let z = z as usize;
        let labelled = uniform_labelled_tree(z, rng)?;
        let r_local = rng.gen_range(0..z as u32);
        let s_local = rng.gen_range(0..z as u32);
        // push the component rooted at its entry vertex S_i
        let mut global = vec![u32::MAX; z];
        global[s_local as usize] = entry;
        if z > 1 {
            let adj = labelled.adjacency();
            let mut queue = std::collections::VecDeque::from([s_local]);
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v as usize] {
                    if global[u as usize] == u32::MAX {
                        let w = rng.gen::<f64>() * x;
                        let id = tree.add_child(global[v as usize], w);
                        global[u as usize] = id;
                        activation.push(x);
                        component.push(i as u32);
                        queue.push_back(u);
                    }
                }
            }
        }
        // distance S_i -> R_i inside the component
        let dists = {
            let mut d = vec![u32::MAX; z];
            let adj = labelled.adjacency();
            let mut queue = std::collections::VecDeque::from([s_local]);
            d[s_local as usize] = 0;
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v as usize] {
                    if d[u as usize] == u32::MAX {
                        d[u as usize] = d[v as usize] + 1;
                        queue.push_back(u);
                    }
                }
            }
            d
        };
        dist_to_root += dists[r_local as usize] + 1;
        backbone_dist.push(dist_to_root);
        // bridge {R_i, S_{i+1}} with weight exactly X_i
        if i + 1 < depth {
            let next_x = chain.weight(i + 1);
            let s_next = tree.add_child(global[r_local as usize], x);
            activation.push(next_x);
            component.push((i + 1) as u32);
            entry = s_next;
        }
    }
    Ok(BuiltCluster {
        tree,
        activation,
        component,
        backbone_dist,
        depth,
    })
}

/// Sample a chain long enough that the radius-`r_max` ball around the root
/// is certified complete, then assemble it. `max_components` bounds the
/// chain length defensively.
pub fn build_cluster_for_radius(
    gw: &GwNumerics<f64>,
    r_max: u32,
    rng: &mut impl Rng,
) -> Result<BuiltCluster> {
    const MAX_COMPONENTS: usize = 4096;
    let mut entries = Vec::new();
    let mut survival = rng.gen::<f64>();
    let mut tree = RootedWeightedTree::new_root();
    let mut activation: Vec<f64> = Vec::new();
    let mut component: Vec<u32> = Vec::new();
    let mut backbone_dist = Vec::new();
    let mut dist_to_root = 0u32;
    let mut entry = 0u32;
    let mut i = 0usize;
    loop {
        if i >= MAX_COMPONENTS {
            return domain_err("build_cluster_for_radius: component budget exhausted");
        }
        let x = gw.theta_inv(survival)?;
        let z = TruncatedSizeBiasedLaw::sample_streaming(gw, x, rng)?;
        entries.push((x, z));
        survival *= rng.gen::<f64>();
        if i == 0 {
            activation.push(x);
            component.push(0);
        }
        let z = z as usize;
        let labelled = uniform_labelled_tree(z, rng)?;
        let r_local = rng.gen_range(0..z as u32);
        let s_local = rng.gen_range(0..z as u32);
        let mut global = vec![u32::MAX; z];
        global[s_local as usize] = entry;
        let adj = labelled.adjacency();
        if z > 1 {
            let mut queue = std::collections::VecDeque::from([s_local]);
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v as usize] {
                    if global[u as usize] == u32::MAX {
                        let w = rng.gen::<f64>() * x;
                        let id = tree.add_child(global[v as usize], w);
                        global[u as usize] = id;
                        activation.push(x);
                        component.push(i as u32);
                        queue.push_back(u);
                    }
                }
            }
        }
        let mut d = vec![u32::MAX; z];
        let mut queue = std::collections::VecDeque::from([s_local]);
        d[s_local as usize] = 0;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v as usize] {
                if d[u as usize] == u32::MAX {
                    d[u as usize] = d[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist_to_root += d[r_local as usize] + 1;
        backbone_dist.push(dist_to_root);
        if dist_to_root > r_max {
            return Ok(BuiltCluster {
                tree,
                activation,
                component,
                backbone_dist,
                depth: i + 1,
            });
        }
        // open the next component
        let next_survival_x = gw.theta_inv(survival)?;
        let s_next = tree.add_child(global[r_local as usize], x);
        activation.push(next_survival_x);
        component.push((i + 1) as u32);
        entry = s_next;
        i += 1;
    }
}

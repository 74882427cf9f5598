//! Seeded random instances and exhaustive small graph families.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{AgentId, BuildError, Instance};

/// Which sign classes random values may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    /// Uniform in `[0, hi]`.
    Goods,
    /// Uniform in `[lo, 0]`.
    Chores,
    /// Uniform in `[lo, hi]`.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("{m} edges do not fit a simple graph on {n} vertices")]
    TooManyEdges { n: usize, m: usize },
    #[error("empty value range [{lo}, {hi}]")]
    EmptyRange { lo: i64, hi: i64 },
    #[error(transparent)]
    Build(#[from] BuildError),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform simple graph with exactly `m` edges, pairs sorted.
pub fn random_graph(rng: &mut impl Rng, n: usize, m: usize) -> Result<Vec<(AgentId, AgentId)>, GenError> {
    let all = n * n.saturating_sub(1) / 2;
    if m > all {
        return Err(GenError::TooManyEdges { n, m });
    }
    let mut pairs: Vec<(AgentId, AgentId)> = sample(rng, all, m).into_iter().map(|k| unrank_pair(k)).collect();
    pairs.sort_unstable();
    Ok(pairs)
}

/// k-th pair `(u, v)`, `u < v`, in the order (0,1), (0,2), (1,2), (0,3), ...
fn unrank_pair(k: usize) -> (AgentId, AgentId) {
    let mut v = 1;
    while v * (v + 1) / 2 <= k {
        v += 1;
    }
    (k - v * (v - 1) / 2, v)
}

/// Uniform labelled tree on `n` vertices from a random Prüfer sequence.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> Vec<(AgentId, AgentId)> {
    if n < 2 {
        return Vec::new();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut pairs = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        pairs.push((leaf.min(x), leaf.max(x)));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    pairs.push((rest[0], rest[1]));
    pairs.sort_unstable();
    pairs
}

fn draw(rng: &mut impl Rng, kind: ValueKind, lo: i64, hi: i64) -> i64 {
    match kind {
        ValueKind::Goods => rng.gen_range(0..=hi),
        ValueKind::Chores => rng.gen_range(lo..=0),
        ValueKind::Mixed => rng.gen_range(lo..=hi),
    }
}

/// Random values for the given pairs, drawn per endpoint in edge order.
pub fn random_values(
    rng: &mut impl Rng,
    pairs: &[(AgentId, AgentId)],
    kind: ValueKind,
    lo: i64,
    hi: i64,
) -> Result<Vec<(i64, i64)>, GenError> {
    let (a, b) = match kind {
        ValueKind::Goods => (0, hi),
        ValueKind::Chores => (lo, 0),
        ValueKind::Mixed => (lo, hi),
    };
    if a > b {
        return Err(GenError::EmptyRange { lo: a, hi: b });
    }
    Ok(pairs.iter().map(|_| (draw(rng, kind, lo, hi), draw(rng, kind, lo, hi))).collect())
}

/// Reproducible random instance on a uniform simple graph.
pub fn random_instance(seed: u64, kind: ValueKind, n: usize, m: usize, lo: i64, hi: i64) -> Result<Instance, GenError> {
    let mut r = rng(seed);
    let pairs = random_graph(&mut r, n, m)?;
    let vals = random_values(&mut r, &pairs, kind, lo, hi)?;
    Ok(Instance::from_pairs(n, &pairs, &vals)?)
}

/// Reproducible random instance on a uniform labelled tree.
pub fn random_tree_instance(seed: u64, kind: ValueKind, n: usize, lo: i64, hi: i64) -> Result<Instance, GenError> {
    let mut r = rng(seed);
    let pairs = random_tree(&mut r, n);
    let vals = random_values(&mut r, &pairs, kind, lo, hi)?;
    Ok(Instance::from_pairs(n, &pairs, &vals)?)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative per isomorphism class of simple graphs on exactly `n`
/// vertices with at most `max_m` edges. Each graph is its canonical labelling.
pub fn nonisomorphic_graphs(n: usize, max_m: usize, connected_only: bool) -> Vec<Vec<(AgentId, AgentId)>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let index = |u: usize, v: usize| -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        b * (b - 1) / 2 + a
    };
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..(1u64 << slots.len()) {
        if mask.count_ones() as usize > max_m {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                slots
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| mask >> k & 1 == 1)
                    .fold(0u64, |acc, (_, &(u, v))| acc | 1 << index(p[u], p[v]))
            })
            .min()
            .unwrap_or(0);
        if canon == mask {
            let pairs: Vec<(usize, usize)> = slots
                .iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            if !connected_only || is_connected(n, &pairs) {
                seen.insert((pairs.len(), mask));
            }
        }
    }
    seen.into_iter()
        .map(|(_, mask)| slots.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect())
        .collect()
}

fn is_connected(n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    for &(u, v) in pairs {
        let (a, b) = (find(&mut comp, u), find(&mut comp, v));
        comp[a] = b;
    }
    let root = find(&mut comp, 0);
    (0..n).all(|x| find(&mut comp, x) == root)
}

/// Calls `f` with every vector in `choices^len`, last position fastest.
pub fn for_each_product<T: Copy>(choices: &[T], len: usize, mut f: impl FnMut(&[T])) {
    if choices.is_empty() && len > 0 {
        return;
    }
    let mut idx = vec![0usize; len];
    let mut cur: Vec<T> = idx.iter().map(|&i| choices[i]).collect();
    loop {
        f(&cur);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices.len() {
                cur[k] = choices[idx[k]];
                break;
            }
            idx[k] = 0;
            cur[k] = choices[0];
        }
    }
}

//! Ward-linkage agglomerative clustering by nearest-neighbour chain.
//!
//! Matrix entries are treated as squared-distance analogues: the Ward
//! Lance-Williams update is applied to them directly and merge heights are
//! the updated values themselves. Square the matrix first
//! ([`CondensedMatrix::squared`]) to treat entries as plain distances instead.

use std::io::Write;

use crate::error::{Error, Result};
use crate::lmethod::EvaluationCurve;
use crate::matrix::{flat, CondensedMatrix};

/// A single agglomeration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// Smaller node id of the two children.
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// Merge list over `n` leaves: leaves are `0..n`, the node created by merge
/// `s` has id `n + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

/// Flat clustering: one cluster id in `0..k` per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<usize>,
    k: usize,
}

impl Assignment {
    /// Validates that ids are dense in `0..k`.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; k];
        labels.iter().for_each(|&l| used[l] = true);
        if let Some(empty) = used.iter().position(|u| !u) {
            return Err(Error::invalid(format!("cluster id {empty} has no members")));
        }
        Ok(Assignment { labels, k })
    }

    /// Renumbers arbitrary cluster keys so ids follow first appearance.
    pub fn from_keys<K: Eq + std::hash::Hash>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids = std::collections::HashMap::new();
        let labels: Vec<usize> = keys
            .into_iter()
            .map(|key| {
                let next = ids.len();
                *ids.entry(key).or_insert(next)
            })
            .collect();
        Assignment { k: ids.len(), labels }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn cluster_of(&self, object: usize) -> usize {
        self.labels[object]
    }

    /// Members of each cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        let root = ra.min(rb);
        self.parent[ra] = root;
        self.parent[rb] = root;
        root
    }
}

/// Ward clustering of `m`. The matrix is consumed as working storage.
pub fn ward_ahc(mut m: CondensedMatrix) -> Result<Dendrogram> {
    let n = m.n();
    if n < 2 {
        return Err(Error::invalid("clustering needs at least 2 objects"));
    }
    let raw = nn_chain(&mut m);
    Ok(Dendrogram { n, merges: canonical_order(n, raw) })
}

/// A merge as discovered by the chain: slots are the matrix rows holding
/// each cluster, `leaf` is any member used to resolve node ids afterwards.
struct RawMerge {
    a: usize,
    b: usize,
    height: f64,
}

fn nn_chain(m: &mut CondensedMatrix) -> Vec<RawMerge> {
    let n = m.n();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    let mut merges = Vec::with_capacity(n - 1);
    let d = m.values_mut();

    while merges.len() < n - 1 {
        if chain.is_empty() {
            chain.push(active.iter().position(|&a| a).expect("an active cluster remains"));
        }
        let (a, b, height) = loop {
            let tip = chain[chain.len() - 1];
            let prev = (chain.len() >= 2).then(|| chain[chain.len() - 2]);
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            if let Some(p) = prev {
                best = p;
                best_d = d[pair(tip, p, n)];
            }
            for x in 0..n {
                if x == tip || !active[x] {
                    continue;
                }
                let dx = d[pair(tip, x, n)];
                if dx < best_d {
                    best = x;
                    best_d = dx;
                }
            }
            if Some(best) == prev {
                chain.truncate(chain.len() - 2);
                break (tip, best, best_d);
            }
            chain.push(best);
        };

        // The merged cluster lives on in the smaller slot.
        let (keep, drop) = (a.min(b), a.max(b));
        let (na, nb) = (size[keep] as f64, size[drop] as f64);
        for k in 0..n {
            if !active[k] || k == keep || k == drop {
                continue;
            }
            let nk = size[k] as f64;
            let dk = d[pair(keep, k, n)];
            let dd = d[pair(drop, k, n)];
            let updated = ((na + nk) * dk + (nb + nk) * dd - nk * height) / (na + nb + nk);
            // Reducibility guarantees updated >= height; clamp away roundoff.
            d[pair(keep, k, n)] = updated.max(height);
        }
        size[keep] += size[drop];
        active[drop] = false;
        merges.push(RawMerge { a: keep, b: drop, height });
    }
    merges
}

#[inline]
fn pair(i: usize, j: usize, n: usize) -> usize {
    if i < j {
        flat(i, j, n)
    } else {
        flat(j, i, n)
    }
}

/// Orders merges by height and assigns node ids. Within a run of equal
/// heights the merge with the lexicographically smallest (left, right) node
/// pair goes first, subject to children preceding parents.
fn canonical_order(n: usize, mut raw: Vec<RawMerge>) -> Vec<Merge> {
    // Stable: equal heights keep discovery order, which respects dependencies.
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&x, &y| raw[x].height.total_cmp(&raw[y].height));
    let sorted: Vec<RawMerge> = order
        .into_iter()
        .map(|i| std::mem::replace(&mut raw[i], RawMerge { a: 0, b: 0, height: 0.0 }))
        .collect();

    let mut uf = UnionFind::new(n);
    let mut node_of_root: Vec<usize> = (0..n).collect();
    let mut size_of_root = vec![1usize; n];
    let mut out = Vec::with_capacity(sorted.len());

    let mut start = 0;
    while start < sorted.len() {
        let h = sorted[start].height;
        let end = start + sorted[start..].iter().take_while(|r| r.height == h).count();
        let mut pending: Vec<&RawMerge> = sorted[start..end].iter().collect();
        while !pending.is_empty() {
            // A merge is ready when no earlier pending merge touches its slots.
            let mut best: Option<(usize, (usize, usize))> = None;
            for (idx, r) in pending.iter().enumerate() {
                let blocked = pending[..idx]
                    .iter()
                    .any(|e| e.a == r.a || e.a == r.b || e.b == r.a || e.b == r.b);
                if blocked {
                    continue;
                }
                let ia = node_of_root[uf.find(r.a)];
                let ib = node_of_root[uf.find(r.b)];
                let key = (ia.min(ib), ia.max(ib));
                if best.is_none_or(|(_, k)| key < k) {
                    best = Some((idx, key));
                }
            }
            let (idx, (left, right)) = best.expect("the first pending merge is always ready");
            let r = pending.remove(idx);
            let (ra, rb) = (uf.find(r.a), uf.find(r.b));
            let size = size_of_root[ra] + size_of_root[rb];
            let root = uf.union(ra, rb);
            node_of_root[root] = n + out.len();
            size_of_root[root] = size;
            out.push(Merge { left, right, height: r.height, size });
        }
        start = end;
    }
    out
}

impl Dendrogram {
    /// Validates a merge list over `n` leaves.
    pub fn from_merges(n: usize, merges: Vec<Merge>) -> Result<Self> {
        if n < 2 || merges.len() != n - 1 {
            return Err(Error::invalid(format!("{} merges cannot form a dendrogram over {n} leaves", merges.len())));
        }
        let mut used = vec![false; 2 * n - 1];
        let mut sizes = vec![1usize; 2 * n - 1];
        let mut last = f64::NEG_INFINITY;
        for (s, m) in merges.iter().enumerate() {
            let id = n + s;
            if m.left >= id || m.right >= id || m.left == m.right {
                return Err(Error::invalid(format!("merge {s} references an unknown node")));
            }
            for child in [m.left, m.right] {
                if std::mem::replace(&mut used[child], true) {
                    return Err(Error::invalid(format!("node {child} merged twice")));
                }
            }
            if m.size != sizes[m.left] + sizes[m.right] {
                return Err(Error::invalid(format!("merge {s} has inconsistent size {}", m.size)));
            }
            if m.height.is_nan() || m.height < last {
                return Err(Error::invalid(format!("merge {s} height decreases")));
            }
            last = m.height;
            sizes[id] = m.size;
        }
        Ok(Dendrogram { n, merges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Undoes the last `k - 1` merges. Cluster ids follow each cluster's
    /// smallest member.
    pub fn cut(&self, k: usize) -> Result<Assignment> {
        if k == 0 || k > self.n {
            return Err(Error::invalid(format!("cannot cut {} objects into {k} clusters", self.n)));
        }
        let n = self.n;
        let mut uf = UnionFind::new(n);
        // Any leaf below each node, to drive the union-find.
        let mut leaf = (0..n).collect::<Vec<_>>();
        leaf.resize(2 * n - 1, 0);
        for (s, m) in self.merges[..n - k].iter().enumerate() {
            uf.union(leaf[m.left], leaf[m.right]);
            leaf[n + s] = leaf[m.left];
        }
        let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        Ok(Assignment::from_keys(roots))
    }

    /// Points `(c, h)` for `c` in `2..=n`: the height of the merge undone
    /// when going from `c - 1` to `c` clusters.
    pub fn merge_height_curve(&self) -> EvaluationCurve {
        let n = self.n;
        let heights = (2..=n).map(|c| self.merges[n - c].height).collect();
        EvaluationCurve::from_heights(heights)
    }

    /// Writes `left,right,height,size` rows in merge order.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["left", "right", "height", "size"])?;
        for m in &self.merges {
            out.write_record([m.left.to_string(), m.right.to_string(), m.height.to_string(), m.size.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Convenience wrapper around [`Dendrogram::cut`].
pub fn cut(d: &Dendrogram, k: usize) -> Result<Assignment> {
    d.cut(k)
}

/// Convenience wrapper around [`Dendrogram::merge_height_curve`].
pub fn merge_height_curve(d: &Dendrogram) -> EvaluationCurve {
    d.merge_height_curve()
}

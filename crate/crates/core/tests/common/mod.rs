//! Slow, direct reference implementations and random input helpers shared by
//! the integration tests. Nothing here calls into the library's algorithms.
#![allow(dead_code)]

use std::collections::HashMap;

use mahc::Segment;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_frames(rng: &mut impl Rng, len: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..len).map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect()
}

pub fn random_segment(rng: &mut impl Rng, id: u64, dim: usize, max_len: usize) -> Segment {
    let len = rng.gen_range(1..=max_len);
    Segment::new(id, None, random_frames(rng, len, dim)).unwrap()
}

pub fn frames_of(s: &Segment) -> Vec<Vec<f64>> {
    s.frames().map(<[f64]>::to_vec).collect()
}

pub fn euclid(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for t in 0..x.len() {
        acc += (x[t] - y[t]).powi(2);
    }
    acc.sqrt()
}

/// Minimum path cost over every monotone alignment path, found by walking
/// all of them.
pub fn dtw_brute(a: &[Vec<f64>], b: &[Vec<f64>], cost: &dyn Fn(&[f64], &[f64]) -> f64) -> f64 {
    fn walk(
        i: usize,
        j: usize,
        acc: f64,
        a: &[Vec<f64>],
        b: &[Vec<f64>],
        cost: &dyn Fn(&[f64], &[f64]) -> f64,
        best: &mut f64,
    ) {
        let acc = acc + cost(&a[i], &b[j]);
        if i + 1 == a.len() && j + 1 == b.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(i + 1, j + 1, acc, a, b, cost, best);
        }
        if i + 1 < a.len() {
            walk(i + 1, j, acc, a, b, cost, best);
        }
        if j + 1 < b.len() {
            walk(i, j + 1, acc, a, b, cost, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(0, 0, 0.0, a, b, cost, &mut best);
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleMerge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// Greedy Ward clustering straight from the definition. The cost of merging
/// clusters A and B is evaluated in closed form over the original entries:
///
/// `2|A||B|/(|A|+|B|) * (S(A,B)/(|A||B|) - S(A,A)/(2|A|^2) - S(B,B)/(2|B|^2))`
///
/// where `S(X,Y)` sums `d(x,y)` over all ordered pairs. Each step takes the
/// cheapest pair; costs within `1e-9` relative count as equal and the pair
/// with the smallest `(min id, max id)` wins. New nodes get ids `n + step`.
pub fn ward_naive(n: usize, d: &dyn Fn(usize, usize) -> f64) -> Vec<OracleMerge> {
    let dist = |i: usize, j: usize| if i == j { 0.0 } else { d(i.min(j), i.max(j)) };
    let mut node = (0..n).collect::<Vec<_>>();
    let mut size = vec![1usize; n];
    let mut alive = vec![true; n];
    let mut cross = vec![vec![0.0; n]; n];
    let mut within = vec![0.0; n];
    for (i, row) in cross.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = dist(i, j);
        }
    }
    let cost = |a: usize, b: usize, size: &[usize], cross: &[Vec<f64>], within: &[f64]| {
        let (na, nb) = (size[a] as f64, size[b] as f64);
        2.0 * na * nb / (na + nb)
            * (cross[a][b] / (na * nb) - within[a] / (2.0 * na * na) - within[b] / (2.0 * nb * nb))
    };
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for a in 0..n {
            for b in a + 1..n {
                if !alive[a] || !alive[b] {
                    continue;
                }
                let w = cost(a, b, &size, &cross, &within);
                let key = (node[a].min(node[b]), node[a].max(node[b]));
                let better = match best {
                    None => true,
                    Some((bw, bkey, _, _)) => {
                        let tol = 1e-9 * bw.abs().max(w.abs()).max(1e-300);
                        if (w - bw).abs() <= tol {
                            key < bkey
                        } else {
                            w < bw
                        }
                    }
                };
                if better {
                    best = Some((w, key, a, b));
                }
            }
        }
        let (w, (left, right), a, b) = best.expect("two live clusters");
        within[a] += within[b] + 2.0 * cross[a][b];
        let merged: Vec<f64> = cross[a].iter().zip(&cross[b]).map(|(x, y)| x + y).collect();
        for (k, &v) in merged.iter().enumerate() {
            cross[k][a] = v;
        }
        cross[a] = merged;
        cross[a][a] = 0.0;
        size[a] += size[b];
        alive[b] = false;
        node[a] = n + step;
        out.push(OracleMerge { left, right, height: w, size: size[a] });
    }
    out
}

/// Flat clusters after replaying the first `n - k` oracle merges, as a
/// canonical set of sorted member lists.
pub fn oracle_cut(n: usize, merges: &[OracleMerge], k: usize) -> Vec<Vec<usize>> {
    let mut members: HashMap<usize, Vec<usize>> = (0..n).map(|i| (i, vec![i])).collect();
    for (s, m) in merges[..n - k].iter().enumerate() {
        let mut joined = members.remove(&m.left).unwrap();
        joined.extend(members.remove(&m.right).unwrap());
        members.insert(n + s, joined);
    }
    canonical(members.into_values().collect())
}

/// Sorts each group and the list of groups, so partitions compare as sets.
pub fn canonical(mut groups: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    groups.iter_mut().for_each(|g| g.sort_unstable());
    groups.sort();
    groups
}

pub fn groups_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut by: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by.entry(l).or_default().push(i);
    }
    canonical(by.into_values().collect())
}

/// Least squares through the normal equations on raw sums.
pub fn normal_equation_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let m = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let intercept = (sy - slope * sx) / m;
    let sse: f64 = points.iter().map(|&(x, y)| (y - slope * x - intercept).powi(2)).sum();
    (slope, intercept, (sse / m).sqrt())
}

/// Knee by scanning every split that leaves two points on each side.
/// `heights[i]` is the y value at x = i + 2. Objectives within `1e-9` of the
/// largest |y| tie, and the smallest split wins.
pub fn l_method_scan(heights: &[f64]) -> usize {
    let b = heights.len() + 1;
    if heights.len() < 4 {
        return 2;
    }
    let pts: Vec<(f64, f64)> = heights.iter().enumerate().map(|(i, &y)| ((i + 2) as f64, y)).collect();
    let tol = 1e-9 * heights.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let mut best = (f64::INFINITY, 0);
    for c in 3..=b - 2 {
        let left: Vec<_> = pts.iter().copied().filter(|p| p.0 <= c as f64).collect();
        let right: Vec<_> = pts.iter().copied().filter(|p| p.0 > c as f64).collect();
        let total = (c - 1) as f64 / (b - 1) as f64 * normal_equation_fit(&left).2
            + (b - c) as f64 / (b - 1) as f64 * normal_equation_fit(&right).2;
        if total < best.0 - tol {
            best = (total, c);
        }
    }
    best.1
}

/// Curve over x = 2..=b made of two lines that cross strictly between
/// `corner` and `corner + 1`, so the split at `corner` is the only exact fit.
pub fn corner_curve(b: usize, corner: usize, left_slope: f64, right_slope: f64) -> Vec<f64> {
    let cross = corner as f64 + 0.5;
    let at_cross = 1000.0;
    (2..=b)
        .map(|x| {
            let dx = x as f64 - cross;
            if x <= corner {
                at_cross + left_slope * dx
            } else {
                at_cross + right_slope * dx
            }
        })
        .collect()
}

/// Class-weighted best-match F-measure computed from scratch:
/// `F(k, l) = 2 n_kl / (n_k + n_l)`, the harmonic mean of `n_kl/n_k` and
/// `n_kl/n_l`.
pub fn f_measure_brute<C: PartialEq, L: PartialEq>(clusters: &[C], classes: &[L]) -> f64 {
    let n = clusters.len();
    let mut total = 0.0;
    let mut seen_classes: Vec<&L> = Vec::new();
    for l in classes {
        if seen_classes.contains(&l) {
            continue;
        }
        seen_classes.push(l);
        let n_l = classes.iter().filter(|&x| x == l).count();
        let mut best = 0.0f64;
        let mut seen_clusters: Vec<&C> = Vec::new();
        for k in clusters {
            if seen_clusters.contains(&k) {
                continue;
            }
            seen_clusters.push(k);
            let n_k = clusters.iter().filter(|&x| x == k).count();
            let n_kl = clusters.iter().zip(classes).filter(|(x, y)| *x == k && *y == l).count();
            best = best.max(2.0 * n_kl as f64 / (n_k + n_l) as f64);
        }
        total += n_l as f64 * best;
    }
    total / n as f64
}

/// Medoid of `members` by summing every pairwise distance afresh; ties go to
/// the smallest index.
pub fn medoid_brute(members: &[usize], d: &dyn Fn(usize, usize) -> f64) -> usize {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let mut best = (f64::INFINITY, usize::MAX);
    for &i in &sorted {
        let sum: f64 = sorted.iter().filter(|&&j| j != i).map(|&j| d(i, j)).sum();
        if sum < best.0 {
            best = (sum, i);
        }
    }
    best.1
}

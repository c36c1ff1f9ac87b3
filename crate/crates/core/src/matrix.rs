//! Condensed (upper-triangular, row-major) pairwise distance matrices.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::data::{Segment, SubsetView};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"MAHCCM01";

/// Entries per parallel work unit.
const CHUNK: usize = 2048;

/// Flat index of the pair `(i, j)`, `i < j < n`.
pub fn condensed_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= j || j >= n {
        return Err(Error::invalid(format!("pair ({i}, {j}) is not i < j < {n}")));
    }
    Ok(flat(i, j, n))
}

#[inline]
pub(crate) fn flat(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Pairwise distances between `n` objects, `n(n-1)/2` values.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CondensedMatrix {
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("a distance matrix needs at least 2 objects, got {n}")));
        }
        if values.len() != n * (n - 1) / 2 {
            return Err(Error::invalid(format!(
                "{} values cannot be a condensed matrix over {n} objects",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(Error::invalid(format!("distance {v} is not a finite non-negative number")));
        }
        Ok(CondensedMatrix { n, values })
    }

    /// Builds a matrix by evaluating `f(i, j)` for every pair, serially.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                values.push(f(i, j));
            }
        }
        Self::from_values(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Symmetric access. The diagonal is implicitly zero and rejected.
    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::invalid(format!("diagonal entry ({i}, {i}) requested")));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(self.values[condensed_index(i, j, self.n)?])
    }

    /// Unchecked symmetric access for `i != j`.
    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.values[flat(i, j, self.n)]
    }

    /// Element-wise square of every distance.
    pub fn squared(mut self) -> Self {
        self.values.iter_mut().for_each(|v| *v *= *v);
        self
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&(self.values.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(8 * self.values.len());
        for v in &self.values {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::invalid("not a condensed matrix dump (bad magic)"));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let count = u64::from_le_bytes(word) as usize;
        if n < 2 || count != n * (n - 1) / 2 {
            return Err(Error::invalid(format!("inconsistent header: n = {n}, count = {count}")));
        }
        let mut bytes = vec![0u8; count * 8];
        r.read_exact(&mut bytes)?;
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        Self::from_values(n, values)
    }
}

/// First pair `(i, j)` whose flat index is `>= k`.
fn unflatten(k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    let mut row_start = 0;
    loop {
        let row_len = n - i - 1;
        if k < row_start + row_len {
            return (i, i + 1 + (k - row_start));
        }
        row_start += row_len;
        i += 1;
    }
}

/// Computes all pairwise distances of `view` using `workers` threads.
///
/// The result is bit-identical for every `workers` value: each entry is
/// written exactly once by exactly one task.
pub fn build_matrix<F>(view: &SubsetView<'_>, distance: F, workers: usize) -> Result<CondensedMatrix>
where
    F: Fn(&Segment, &Segment) -> Result<f64> + Sync,
{
    crate::parallel::with_workers(workers, || build_in_pool(view, &distance, None))?
}

/// Same as [`build_matrix`] but runs on the current rayon pool and refuses
/// subsets above `cap`.
pub(crate) fn build_in_pool<F>(
    view: &SubsetView<'_>,
    distance: &F,
    cap: Option<usize>,
) -> Result<CondensedMatrix>
where
    F: Fn(&Segment, &Segment) -> Result<f64> + Sync,
{
    let n = view.len();
    if n < 2 {
        return Err(Error::invalid(format!("a distance matrix needs at least 2 objects, got {n}")));
    }
    if let Some(cap) = cap {
        if n > cap {
            return Err(Error::CapExceeded { size: n, cap });
        }
    }
    let mut values = vec![0.0f64; n * (n - 1) / 2];
    let failures: Vec<Error> = values
        .par_chunks_mut(CHUNK)
        .enumerate()
        .filter_map(|(c, chunk)| {
            let (mut i, mut j) = unflatten(c * CHUNK, n);
            for slot in chunk.iter_mut() {
                match distance(view.get(i), view.get(j)) {
                    Ok(d) if d >= 0.0 && d.is_finite() => *slot = d,
                    Ok(d) => {
                        let source = Box::new(Error::invalid(format!("distance {d} is not finite and non-negative")));
                        return Some(Error::PairDistance { i: view.position(i), j: view.position(j), source });
                    }
                    Err(e) => {
                        return Some(Error::PairDistance {
                            i: view.position(i),
                            j: view.position(j),
                            source: Box::new(e),
                        })
                    }
                }
                j += 1;
                if j == n {
                    i += 1;
                    j = i + 1;
                }
            }
            None
        })
        .collect();
    if let Some(e) = failures.into_iter().next() {
        return Err(e);
    }
    Ok(CondensedMatrix { n, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;
    use crate::dtw::dtw_distance;

    fn points(xs: &[f64]) -> Dataset {
        Dataset::new(
            xs.iter()
                .enumerate()
                .map(|(i, &x)| Segment::from_flat(i as u64, None, 1, vec![x]).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn dtw(a: &Segment, b: &Segment) -> Result<f64> {
        dtw_distance(a, b).map(f64::from)
    }

    #[test]
    fn index_layout() {
        assert_eq!(condensed_index(0, 1, 2).unwrap(), 0);
        for n in 2..9 {
            assert_eq!(condensed_index(0, n - 1, n).unwrap(), n - 2);
        }
        assert!(condensed_index(2, 2, 5).is_err());
        assert!(condensed_index(3, 1, 5).is_err());
        assert!(condensed_index(1, 5, 5).is_err());
    }

    #[test]
    fn index_is_a_bijection_for_seven() {
        let n = 7;
        let mut seen = vec![false; n * (n - 1) / 2];
        for i in 0..n {
            for j in i + 1..n {
                let k = condensed_index(i, j, n).unwrap();
                assert!(!seen[k], "collision at {k}");
                seen[k] = true;
                assert_eq!(unflatten(k, n), (i, j));
            }
        }
        assert_eq!(seen.len(), 21);
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn build_small() {
        let ds = points(&[0.0, 1.0, 3.0]);
        let m = build_matrix(&ds.full_view(), dtw, 1).unwrap();
        assert_eq!(m.values(), &[1.0, 3.0, 2.0]);
        assert_eq!(m.get(0, 2).unwrap(), 3.0);
        assert_eq!(m.get(2, 0).unwrap(), m.get(0, 2).unwrap());
        assert!(m.get(1, 1).is_err());

        let twins = points(&[4.0, 4.0]);
        assert_eq!(build_matrix(&twins.full_view(), dtw, 2).unwrap().values(), &[0.0]);
    }

    #[test]
    fn build_rejects_tiny_and_oversized() {
        let ds = points(&[0.0, 1.0, 3.0]);
        assert!(build_matrix(&ds.view(vec![1]).unwrap(), dtw, 1).is_err());
        let err = build_in_pool(&ds.full_view(), &dtw, Some(2)).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { size: 3, cap: 2 }));
    }

    #[test]
    fn failing_distance_names_the_pair() {
        let ds = points(&[0.0, 1.0, 3.0, 7.0]);
        let view = ds.view(vec![1, 2, 3]).unwrap();
        let err = build_matrix(
            &view,
            |a, b| if a.id() == 2 && b.id() == 3 { Err(Error::invalid("boom")) } else { Ok(1.0) },
            1,
        )
        .unwrap_err();
        assert!(matches!(err, Error::PairDistance { i: 2, j: 3, .. }), "{err}");
    }

    #[test]
    fn dump_and_load() {
        let m = CondensedMatrix::from_values(4, vec![0.5, 1.0, 2.0, 3.25, 1e-300, 7.0]).unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 6 * 8);
        assert_eq!(CondensedMatrix::read_from(&buf[..]).unwrap(), m);
        buf[0] = b'X';
        assert!(CondensedMatrix::read_from(&buf[..]).is_err());
    }
}

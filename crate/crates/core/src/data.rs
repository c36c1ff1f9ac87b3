//! Datasets of variable-length vector sequences and index-based subset views.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// One variable-length sequence of `dim`-dimensional frames.
///
/// Frames are stored contiguously, row after row.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    id: u64,
    label: Option<String>,
    dim: usize,
    data: Vec<f64>,
}

impl Segment {
    /// Builds a segment from a list of frames. All frames must share one
    /// non-zero dimension and there must be at least one.
    pub fn new(id: u64, label: Option<String>, frames: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match frames.first() {
            Some(f) => f.len(),
            None => return Err(Error::EmptySegment(id)),
        };
        if dim == 0 {
            return Err(Error::invalid(format!("segment {id} has zero-dimensional frames")));
        }
        let mut data = Vec::with_capacity(dim * frames.len());
        for f in &frames {
            if f.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.len() });
            }
            data.extend_from_slice(f);
        }
        Ok(Segment { id, label, dim, data })
    }

    /// Builds a segment from frames already laid out row-major.
    pub fn from_flat(id: u64, label: Option<String>, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid(format!("segment {id} has zero-dimensional frames")));
        }
        if data.is_empty() {
            return Err(Error::EmptySegment(id));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "segment {id}: {} values is not a multiple of dimension {dim}",
                data.len()
            )));
        }
        Ok(Segment { id, label, dim, data })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of frames.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn frames(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }
}

/// An immutable, validated collection of segments sharing one frame dimension.
#[derive(Debug, Clone)]
pub struct Dataset {
    segments: Vec<Segment>,
    dim: usize,
    labelled: bool,
}

impl Dataset {
    /// Validates and wraps `segments`. The dimension is taken from the first
    /// segment; ids must be unique and labels all-or-nothing.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let first = segments.first().ok_or(Error::Empty("dataset has no segments"))?;
        let dim = first.dim();
        let labelled = first.label().is_some();
        let mut seen = HashSet::with_capacity(segments.len());
        for s in &segments {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
            }
            if !seen.insert(s.id()) {
                return Err(Error::DuplicateId(s.id()));
            }
            if s.label().is_some() != labelled {
                return Err(Error::PartialLabels);
            }
        }
        Ok(Dataset { segments, dim, labelled })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, index: usize) -> &Segment {
        &self.segments[index]
    }

    pub fn is_labelled(&self) -> bool {
        self.labelled
    }

    /// Ground-truth labels in dataset order, if the dataset carries them.
    pub fn labels(&self) -> Option<Vec<&str>> {
        self.labelled
            .then(|| self.segments.iter().map(|s| s.label().unwrap_or_default()).collect())
    }

    /// Number of pairwise distances a single full matrix over this dataset holds.
    pub fn pair_count(&self) -> u64 {
        let n = self.len() as u64;
        n * n.saturating_sub(1) / 2
    }

    /// A view over the whole dataset.
    pub fn full_view(&self) -> SubsetView<'_> {
        SubsetView { dataset: self, indices: (0..self.len()).collect() }
    }

    pub fn view(&self, indices: Vec<usize>) -> Result<SubsetView<'_>> {
        SubsetView::new(self, indices)
    }
}

/// A subset of a [`Dataset`] addressed by position, without copying frames.
///
/// Member indices are kept sorted ascending.
#[derive(Debug, Clone)]
pub struct SubsetView<'a> {
    dataset: &'a Dataset,
    indices: Vec<usize>,
}

impl<'a> SubsetView<'a> {
    /// Creates a view over `indices`, which must be unique and within the
    /// dataset. They are stored in increasing order.
    pub fn new(dataset: &'a Dataset, mut indices: Vec<usize>) -> Result<Self> {
        let n = dataset.len();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, len: n });
        }
        let mut seen = vec![false; n];
        for &i in &indices {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicateIndex(i));
            }
        }
        indices.sort_unstable();
        Ok(SubsetView { dataset, indices })
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Dataset positions of the members, ascending.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Dataset position of member `k`.
    pub fn position(&self, k: usize) -> usize {
        self.indices[k]
    }

    pub fn get(&self, k: usize) -> &'a Segment {
        self.dataset.segment(self.indices[k])
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &'a Segment> + '_ {
        let ds = self.dataset;
        self.indices.iter().map(move |&i| ds.segment(i))
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.indices
    }
}

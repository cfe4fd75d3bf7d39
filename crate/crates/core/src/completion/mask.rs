use rand::Rng;

/// Bernoulli sample of entries of a `rows x cols` index grid.
///
/// `selected[i]` lists, in increasing order, the local column positions
/// sampled in local row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    rows: Vec<usize>,
    cols: Vec<usize>,
    selected: Vec<Vec<usize>>,
}

impl Mask {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, selected: Vec<Vec<usize>>) -> Self {
        assert_eq!(rows.len(), selected.len());
        debug_assert!(selected.iter().flatten().all(|&j| j < cols.len()));
        Mask { rows, cols, selected }
    }

    /// Mask covering every entry.
    pub fn full(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        let selected = vec![(0..cols.len()).collect(); rows.len()];
        Mask { rows, cols, selected }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn selected(&self, local_row: usize) -> &[usize] {
        &self.selected[local_row]
    }

    pub fn len(&self) -> usize {
        self.selected.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sampled entries as global `(user, arm)` pairs, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.selected
            .iter()
            .enumerate()
            .flat_map(move |(i, js)| js.iter().map(move |&j| (self.rows[i], self.cols[j])))
    }

    /// 0/1 indicator over the local grid.
    pub fn indicator(&self) -> crate::linalg::Matrix {
        let mut m = crate::linalg::Matrix::zeros(self.rows.len(), self.cols.len());
        for (i, js) in self.selected.iter().enumerate() {
            for &j in js {
                m[(i, j)] = 1.0;
            }
        }
        m
    }
}

/// Includes every pair of `rows x cols` independently with probability `p`.
pub fn sample_mask<R: Rng + ?Sized>(rows: &[usize], cols: &[usize], p: f64, rng: &mut R) -> Mask {
    assert!(p > 0.0 && p <= 1.0, "sampling probability {p} outside (0, 1]");
    let selected = rows
        .iter()
        .map(|_| (0..cols.len()).filter(|_| rng.gen_bool(p)).collect())
        .collect();
    Mask::new(rows.to_vec(), cols.to_vec(), selected)
}

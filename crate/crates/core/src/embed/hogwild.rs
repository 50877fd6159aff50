use std::cell::UnsafeCell;

/// Row-major `f32` matrix that several training threads update without locks.
///
/// Concurrent writers may interleave on the same row; lost or torn updates are
/// accepted as in lock-free SGD. Callers running a single worker get ordinary
/// sequential semantics.
pub(crate) struct SharedMatrix {
    data: Box<[UnsafeCell<f32>]>,
    cols: usize,
}

// SAFETY: rows are accessed through raw element pointers only; racing f32
// writes can lose updates but never produce out-of-bounds accesses.
unsafe impl Sync for SharedMatrix {}

impl SharedMatrix {
    pub fn from_vec(data: Vec<f32>, cols: usize) -> Self {
        assert!(cols > 0 && data.len().is_multiple_of(cols));
        SharedMatrix {
            data: data.into_iter().map(UnsafeCell::new).collect(),
            cols,
        }
    }

    #[inline]
    fn row_ptr(&self, row: usize) -> *mut f32 {
        let start = row * self.cols;
        assert!(start + self.cols <= self.data.len(), "row {row} out of range");
        // SAFETY: start is in bounds; the pointer keeps the slice's provenance.
        unsafe { UnsafeCell::raw_get(self.data.as_ptr().add(start)) }
    }

    /// `out += scale * row`
    #[inline]
    pub fn add_scaled_row_to(&self, row: usize, scale: f32, out: &mut [f32]) {
        let p = self.row_ptr(row);
        for (j, o) in out.iter_mut().enumerate().take(self.cols) {
            // SAFETY: j < cols and the row is in bounds.
            *o += scale * unsafe { p.add(j).read() };
        }
    }

    /// `row += scale * v`
    #[inline]
    pub fn axpy_row(&self, row: usize, scale: f32, v: &[f32]) {
        let p = self.row_ptr(row);
        for (j, &x) in v.iter().enumerate().take(self.cols) {
            // SAFETY: j < cols and the row is in bounds.
            unsafe {
                let e = p.add(j);
                e.write(e.read() + scale * x);
            }
        }
    }

    /// `row · v`
    #[inline]
    pub fn dot_row(&self, row: usize, v: &[f32]) -> f32 {
        let p = self.row_ptr(row);
        let mut acc = 0.0f32;
        for (j, &x) in v.iter().enumerate().take(self.cols) {
            // SAFETY: j < cols and the row is in bounds.
            acc += unsafe { p.add(j).read() } * x;
        }
        acc
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data.into_vec().into_iter().map(UnsafeCell::into_inner).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_operations() {
        let m = SharedMatrix::from_vec(vec![1.0, 2.0, 3.0, 4.0], 2);
        let mut out = [0.5, 0.5];
        m.add_scaled_row_to(1, 2.0, &mut out);
        assert_eq!(out, [6.5, 8.5]);
        assert_eq!(m.dot_row(0, &[1.0, 1.0]), 3.0);
        m.axpy_row(0, 2.0, &[1.0, -1.0]);
        assert_eq!(m.into_vec(), vec![3.0, 0.0, 3.0, 4.0]);
    }

    #[test]
    fn concurrent_updates_stay_finite() {
        let m = SharedMatrix::from_vec(vec![0.0; 8], 4);
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for _ in 0..10_000 {
                        m.axpy_row(1, 0.001, &[1.0, 1.0, 1.0, 1.0]);
                    }
                });
            }
        });
        let v = m.into_vec();
        assert!(v.iter().all(|x| x.is_finite()));
        assert!(v[4] > 0.0);
    }
}

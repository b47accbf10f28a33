//! Per-channel spatial offset tables for the cycle FC operator.
//!
//! Channel c of the input is read at a spatial displacement that cycles
//! through the pseudo-kernel window with period S_P = K_h*K_w. Offsets are
//! centered: along the non-unit kernel axis, channel c is displaced by
//! `(c mod S_P) - floor(S_P/2)`, so a 1x3 kernel walks -1, 0, +1, -1, ...
//! in w while h stays fixed (and symmetrically for Kx1).

use crate::error::{Error, Result};

/// Pseudo-kernel extents. Supported shapes: 1x1, 1xK, Kx1 with odd K.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub h: usize,
    pub w: usize,
}

impl Kernel {
    pub fn new(h: usize, w: usize) -> Result<Self> {
        if h == 0 || w == 0 {
            return Err(Error::InvalidArgument(format!(
                "kernel extents must be positive, got {h}x{w}"
            )));
        }
        if h % 2 == 0 || w % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "kernel extents must be odd, got {h}x{w}"
            )));
        }
        if h > 1 && w > 1 {
            return Err(Error::InvalidArgument(format!(
                "at most one kernel extent may exceed 1, got {h}x{w}"
            )));
        }
        Ok(Kernel { h, w })
    }

    pub const fn square() -> Self {
        Kernel { h: 1, w: 1 }
    }

    /// Pseudo-kernel size S_P = K_h * K_w.
    #[inline]
    pub fn size(&self) -> usize {
        self.h * self.w
    }

    #[inline]
    pub fn is_pointwise(&self) -> bool {
        self.h == 1 && self.w == 1
    }
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.h, self.w)
    }
}

/// Spatial displacement (dh, dw) per input channel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffsetTable {
    dh: Vec<isize>,
    dw: Vec<isize>,
}

impl OffsetTable {
    /// Builds the table for `c_in` channels; validates the kernel extents.
    pub fn build(c_in: usize, k_h: usize, k_w: usize) -> Result<Self> {
        Ok(Self::from_kernel(c_in, Kernel::new(k_h, k_w)?))
    }

    pub fn from_kernel(c_in: usize, kernel: Kernel) -> Self {
        let period = kernel.size();
        let mut dh = vec![0isize; c_in];
        let mut dw = vec![0isize; c_in];
        if kernel.h > 1 {
            let half = (kernel.h / 2) as isize;
            for c in 0..c_in {
                dh[c] = (c % period) as isize - half;
            }
        } else if kernel.w > 1 {
            let half = (kernel.w / 2) as isize;
            for c in 0..c_in {
                dw[c] = (c % period) as isize - half;
            }
        }
        OffsetTable { dh, dw }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.dh.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.dh.is_empty()
    }

    #[inline]
    pub fn dh(&self, c: usize) -> isize {
        self.dh[c]
    }

    #[inline]
    pub fn dw(&self, c: usize) -> isize {
        self.dw[c]
    }

    pub fn dh_slice(&self) -> &[isize] {
        &self.dh
    }

    pub fn dw_slice(&self) -> &[isize] {
        &self.dw
    }
}

/// Standalone constructor matching the operator-level contract.
pub fn build_offset_table(c_in: usize, k_h: usize, k_w: usize) -> Result<OffsetTable> {
    OffsetTable::build(c_in, k_h, k_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_cycle_1x3() {
        let t = build_offset_table(6, 1, 3).unwrap();
        assert_eq!(t.dw_slice(), &[-1, 0, 1, -1, 0, 1]);
        assert!(t.dh_slice().iter().all(|&d| d == 0));
    }

    #[test]
    fn pointwise_is_all_zero() {
        let t = build_offset_table(4, 1, 1).unwrap();
        assert!(t.dh_slice().iter().all(|&d| d == 0));
        assert!(t.dw_slice().iter().all(|&d| d == 0));
    }

    #[test]
    fn truncated_cycle_3x1() {
        // C_i need not divide the period.
        let t = build_offset_table(5, 3, 1).unwrap();
        assert_eq!(t.dh_slice(), &[-1, 0, 1, -1, 0]);
        assert!(t.dw_slice().iter().all(|&d| d == 0));
    }

    #[test]
    fn invalid_kernels_rejected() {
        assert!(build_offset_table(4, 2, 1).is_err());
        assert!(build_offset_table(4, 0, 1).is_err());
        assert!(build_offset_table(4, 1, 4).is_err());
        assert!(build_offset_table(4, 3, 3).is_err());
    }

    #[test]
    fn periodicity_and_bounds_all_supported_kernels() {
        let kernels = [(1, 1), (1, 3), (3, 1), (1, 5), (5, 1), (1, 7), (7, 1)];
        for &(kh, kw) in &kernels {
            let kernel = Kernel::new(kh, kw).unwrap();
            let period = kernel.size();
            for c_in in 1..=1024 {
                let t = OffsetTable::from_kernel(c_in, kernel);
                for c in 0..c_in {
                    if c + period < c_in {
                        assert_eq!(t.dh(c), t.dh(c + period));
                        assert_eq!(t.dw(c), t.dw(c + period));
                    }
                    assert!(t.dh(c).unsigned_abs() <= kh / 2);
                    assert!(t.dw(c).unsigned_abs() <= kw / 2);
                }
            }
        }
    }
}

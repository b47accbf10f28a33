//! Softmax cross-entropy over (N, K, 1, 1) logits, fused with its gradient.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Returns (mean loss, dloss/dlogits). The gradient is already divided by
/// the batch size: dlogits = (softmax - onehot)/N.
pub fn softmax_xent<T: Scalar>(logits: &Tensor<T>, labels: &[usize]) -> Result<(T, Tensor<T>)> {
    let (nn, kk, hh, ww) = (logits.n(), logits.c(), logits.h(), logits.w());
    if hh != 1 || ww != 1 {
        return Err(Error::InvalidArgument(format!(
            "logits must be (N,K,1,1), got {:?}",
            logits.dims()
        )));
    }
    if labels.len() != nn {
        return Err(Error::InvalidArgument(format!(
            "expected {nn} labels, got {}",
            labels.len()
        )));
    }
    if nn == 0 {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= kk) {
        return Err(Error::InvalidArgument(format!(
            "label {bad} out of range for {kk} classes"
        )));
    }

    let mut dlogits = Tensor::zeros(logits.dims())?;
    let ld = logits.data();
    let dd = dlogits.data_mut();
    let inv_n = T::one() / T::from_usize(nn);
    let mut loss = T::zero();
    for n in 0..nn {
        let row = &ld[n * kk..(n + 1) * kk];
        let max = row.iter().fold(T::neg_infinity(), |a, &v| a.max(v));
        let mut sum = T::zero();
        for &z in row {
            sum += (z - max).exp();
        }
        let lse = max + sum.ln();
        loss += lse - row[labels[n]];
        for k in 0..kk {
            let p = (row[k] - lse).exp();
            let target = if k == labels[n] { T::one() } else { T::zero() };
            dd[n * kk + k] = (p - target) * inv_n;
        }
    }
    Ok((loss * inv_n, dlogits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits_give_ln_k() {
        for k in [2usize, 5, 10] {
            let logits = Tensor::<f64>::zeros([3, k, 1, 1]).unwrap();
            let (loss, _) = softmax_xent(&logits, &[0, k - 1, k / 2]).unwrap();
            assert!((loss - (k as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn saturated_correct_class_drives_loss_to_zero() {
        let mut logits = Tensor::<f64>::zeros([1, 3, 1, 1]).unwrap();
        *logits.at_mut(0, 1, 0, 0) = 20.0;
        let (loss, _) = softmax_xent(&logits, &[1]).unwrap();
        assert!(loss < 1e-8, "loss {loss}");
    }

    #[test]
    fn gradient_sums_to_zero_per_sample() {
        let logits =
            Tensor::<f64>::from_vec([2, 3, 1, 1], vec![0.2, -1.0, 0.5, 2.0, 0.0, -0.7]).unwrap();
        let (_, d) = softmax_xent(&logits, &[2, 0]).unwrap();
        for n in 0..2 {
            let s: f64 = (0..3).map(|k| d.at(n, k, 0, 0)).sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn bad_shapes_rejected() {
        let logits = Tensor::<f64>::zeros([1, 3, 2, 1]).unwrap();
        assert!(softmax_xent(&logits, &[0]).is_err());
        let logits = Tensor::<f64>::zeros([1, 3, 1, 1]).unwrap();
        assert!(softmax_xent(&logits, &[3]).is_err());
        assert!(softmax_xent(&logits, &[0, 1]).is_err());
    }
}

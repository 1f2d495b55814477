//! Unitary multi-dimensional FFT over row-major arrays.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(len: usize) -> PlanPair {
    static TABLE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<usize, PlanPair>)>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = table.lock().expect("fft plan table poisoned");
    let (planner, cache) = &mut *guard;
    if let Some(p) = cache.get(&len) {
        return p.clone();
    }
    let pair = (planner.plan_fft_forward(len), planner.plan_fft_inverse(len));
    cache.insert(len, pair.clone());
    pair
}

/// Transform `data` (row-major with the given `shape`) along `axes`, scaled by
/// `1/sqrt(len)` per axis so the transform is unitary.
pub fn fft_axes(data: &mut [Complex64], shape: &[usize], axes: &[usize], dir: Direction) {
    let total: usize = shape.iter().product();
    assert_eq!(total, data.len(), "shape does not match buffer length");
    for &axis in axes {
        let len = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let (fwd, inv) = plans(len);
        let plan = match dir {
            Direction::Forward => fwd,
            Direction::Inverse => inv,
        };
        let scale = 1.0 / (len as f64).sqrt();
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        if stride == 1 {
            for line in data.chunks_exact_mut(len) {
                plan.process_with_scratch(line, &mut scratch);
                line.iter_mut().for_each(|v| *v *= scale);
            }
            continue;
        }
        // gather runs of neighbouring lines so reads stay contiguous
        let block = len * stride;
        let batch = stride.min(32);
        let mut lines = vec![Complex64::new(0.0, 0.0); len * batch];
        for outer in data.chunks_exact_mut(block) {
            let mut start = 0;
            while start < stride {
                let b = batch.min(stride - start);
                for i in 0..len {
                    let row = &outer[i * stride + start..i * stride + start + b];
                    for (j, v) in row.iter().enumerate() {
                        lines[j * len + i] = *v;
                    }
                }
                plan.process_with_scratch(&mut lines[..b * len], &mut scratch);
                for i in 0..len {
                    let row = &mut outer[i * stride + start..i * stride + start + b];
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = lines[j * len + i] * scale;
                    }
                }
                start += b;
            }
        }
    }
}

pub fn fft_all(data: &mut [Complex64], shape: &[usize], dir: Direction) {
    let axes: Vec<usize> = (0..shape.len()).collect();
    fft_axes(data, shape, &axes, dir);
}

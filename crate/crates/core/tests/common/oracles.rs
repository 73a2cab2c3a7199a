//! Brute-force reference implementations used to check the fast filters.
//!
//! Everything here works on plain row-major slices and deliberately avoids
//! the library's code paths (no summed-area tables, no separable passes).

#![allow(dead_code)]

/// SplitMix64 stream mapped to uniform values in `[-1, 1)`.
pub fn random_values(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
        .collect()
}

fn neighbourhood(nx: usize, ny: usize, values: &[f64], i: usize, j: usize, h: usize) -> Vec<f64> {
    let h = h as isize;
    let mut out = Vec::new();
    for dj in -h..=h {
        for di in -h..=h {
            let y = (j as isize + dj).clamp(0, ny as isize - 1) as usize;
            let x = (i as isize + di).clamp(0, nx as isize - 1) as usize;
            out.push(values[y * nx + x]);
        }
    }
    out
}

/// Two-pass mean and population variance per pixel, replicate padding.
pub fn naive_local_stats(nx: usize, ny: usize, values: &[f64], h: usize) -> (Vec<f64>, Vec<f64>) {
    let mut mean = Vec::with_capacity(nx * ny);
    let mut var = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let w = neighbourhood(nx, ny, values, i, j, h);
            let m = w.iter().sum::<f64>() / w.len() as f64;
            let v = w.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / w.len() as f64;
            mean.push(m);
            var.push(v);
        }
    }
    (mean, var)
}

/// Full-sort median per pixel, replicate padding.
pub fn naive_median(nx: usize, ny: usize, values: &[f64], h: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let mut w = neighbourhood(nx, ny, values, i, j, h);
            w.sort_by(|a, b| a.partial_cmp(b).unwrap());
            out.push(w[w.len() / 2]);
        }
    }
    out
}

/// Direct 2D convolution with the outer-product Gaussian kernel of radius
/// `ceil(3 sigma)`, normalized over the full 2D support.
pub fn naive_gaussian(nx: usize, ny: usize, values: &[f64], sigma: f64) -> Vec<f64> {
    let r = (3.0 * sigma).ceil() as isize;
    let mut kernel = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            let d2 = (dx * dx + dy * dy) as f64;
            kernel.push((dx, dy, (-d2 / (2.0 * sigma * sigma)).exp()));
        }
    }
    let total: f64 = kernel.iter().map(|k| k.2).sum();
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            let mut acc = 0.0;
            for &(dx, dy, w) in &kernel {
                let y = (j + dy).clamp(0, ny as isize - 1) as usize;
                let x = (i + dx).clamp(0, nx as isize - 1) as usize;
                acc += w * values[y * nx + x];
            }
            out.push(acc / total);
        }
    }
    out
}

/// Plain double loop of squared differences.
pub fn naive_energy(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `|a - b| <= tol * max(|b|, scale)`.
pub fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(scale)
}

/// Free-space 2D response at distance `r_m` and time `t_s` to a point source
/// with time signature `source`, up to a constant factor:
/// `int_0^{t - r/c} s(tau) / sqrt((t - tau)^2 - r^2/c^2) dtau`.
///
/// The inverse-square-root singularity is removed with `t - r/c - tau = w^2`
/// and the remaining smooth integral is done with composite Simpson.
pub fn free_space_response(r_m: f64, t_s: f64, c: f64, source: impl Fn(f64) -> f64) -> f64 {
    let lead = t_s - r_m / c;
    if lead <= 0.0 {
        return 0.0;
    }
    let upper = lead.sqrt();
    let n = 4000;
    let h = upper / n as f64;
    let f = |w: f64| 2.0 * source(lead - w * w) / (w * w + 2.0 * r_m / c).sqrt();
    let mut acc = f(0.0) + f(upper);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    acc * h / 3.0
}

//! Radial pieces shared by the quadrature grids and the Fourier transforms:
//! a smooth cutoff near the origin, Gauss–Legendre panels that refine
//! dyadically towards it, and integrals of the capped power spike.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn psi(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth radial cutoff: 1 on `[0, inner]`, 0 beyond `outer`.
pub fn bump(r: f64, inner: f64, outer: f64) -> f64 {
    let a = psi(outer - r);
    let b = psi(r - inner);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Surface area of the unit sphere `S^{d−1}` (counting measure for `d = 1`).
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => f64::NAN,
    }
}

/// Radial nodes `(r, w)` on `[0, outer]` with `∫_0^outer g(r) dr ≈ Σ w g(r)`.
///
/// Panels halve towards the origin for at least `levels` levels and keep
/// halving until they pass `kink` (where a capped spike stops being smooth),
/// which is also inserted as a breakpoint. Panels longer than
/// `max_panel` are split evenly so oscillatory integrands stay resolved.
pub fn radial_panels(outer: f64, levels: usize, kink: Option<f64>, order: usize, max_panel: f64) -> Vec<(f64, f64)> {
    let mut breaks = vec![outer];
    let mut r = outer;
    let floor = kink.filter(|k| *k > 0.0 && *k < outer);
    let mut level = 0;
    while level < levels || floor.is_some_and(|k| r > k) {
        r *= 0.5;
        level += 1;
        if level > 80 {
            break;
        }
        if let Some(k) = floor {
            if r < k && breaks.last().is_some_and(|&b| b > k) {
                breaks.push(k);
            }
        }
        breaks.push(r);
    }
    breaks.push(0.0);
    breaks.dedup();
    let (gx, gw) = gauss_legendre(order);
    let mut nodes = Vec::new();
    for pair in breaks.windows(2).rev() {
        let (lo, hi) = (pair[1], pair[0]);
        let pieces = ((hi - lo) / max_panel).ceil().max(1.0) as usize;
        let step = (hi - lo) / pieces as f64;
        for p in 0..pieces {
            let a = lo + p as f64 * step;
            let half = 0.5 * step;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push((a + half * (1.0 + x), half * w));
            }
        }
    }
    nodes
}

/// `∫_{[−π,π)^d} min(|x|^{−a}, cap) dx`.
///
/// The uncapped cube integral reduces to
/// `2d·π^{d−a}/(d−a)·∫_{[−1,1]^{d−1}} (1+|u|²)^{−a/2} du` by integrating
/// radially out to each face; the cap removes the excess inside the ball of
/// radius `cap^{−1/a}`.
pub fn spike_integral(d: usize, a: f64, cap: f64) -> Option<f64> {
    if !(a > 0.0 && a < d as f64) || d == 0 || d > 3 {
        return None;
    }
    let rc = cap.powf(-1.0 / a);
    if rc >= PI {
        return None;
    }
    let (gx, gw) = gauss_legendre(48);
    let face = match d {
        1 => 1.0,
        2 => gx.iter().zip(&gw).map(|(u, w)| w * (1.0 + u * u).powf(-a / 2.0)).sum(),
        _ => {
            let mut s = 0.0;
            for (u, wu) in gx.iter().zip(&gw) {
                for (v, wv) in gx.iter().zip(&gw) {
                    s += wu * wv * (1.0 + u * u + v * v).powf(-a / 2.0);
                }
            }
            s
        }
    };
    let df = d as f64;
    let full = 2.0 * df * PI.powf(df - a) / (df - a) * face;
    let excess = sphere_area(d) * (rc.powf(df - a) / (df - a) - cap * rc.powf(df) / df);
    Some(full - excess)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1);
        assert_eq!((x1[0], w1[0]), (0.0, 2.0));
    }

    #[test]
    fn bump_limits() {
        assert_eq!(bump(0.1, 0.5, 2.5), 1.0);
        assert_eq!(bump(2.6, 0.5, 2.5), 0.0);
        let m = bump(1.5, 0.5, 2.5);
        assert!((m - 0.5).abs() < 1e-15);
    }

    #[test]
    fn panels_cover_interval() {
        let nodes = radial_panels(2.5, 12, Some(1e-6), 16, 0.1);
        let len: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((len - 2.5).abs() < 1e-13);
        // ∫_{1e-6}^{2.5} dr/r, with the kink resolved exactly.
        let s: f64 = nodes
            .iter()
            .map(|&(r, w)| w * if r > 1e-6 { 1.0 / r } else { 0.0 })
            .sum();
        assert!((s - (2.5e6f64).ln()).abs() < 1e-10, "{s}");
    }

    #[test]
    fn spike_integral_closed_forms() {
        // d = 2, a = 1: 8π·ln(1+√2) minus the capped disc excess π·r_c.
        let got = spike_integral(2, 1.0, 1e6).unwrap();
        let want = 8.0 * PI * (1.0 + 2f64.sqrt()).ln() - PI * 1e-6;
        assert!((got - want).abs() < 1e-12 * want);
        // d = 1: 2∫_0^π r^{-1/2} = 4√π, minus 2∫_0^{r_c}(r^{-1/2} − cap).
        let got = spike_integral(1, 0.5, 1e4).unwrap();
        let rc: f64 = 1e-8;
        let want = 4.0 * PI.sqrt() - 2.0 * (2.0 * rc.sqrt() - 1e4 * rc);
        assert!((got - want).abs() < 1e-12 * want);
    }
}

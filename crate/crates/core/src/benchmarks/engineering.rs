//! Constrained engineering designs. Each returns the objective and the
//! inequality constraints `g_j(x) <= 0`.

use std::f64::consts::PI;

use crate::problem::Response;

/// `[R, L, t_s, t_h]`.
pub fn pressure_vessel(x: &[f64]) -> Response {
    let (r, l, ts, th) = (x[0], x[1], x[2], x[3]);
    let f = 0.6224 * r * l * ts + 1.7781 * r * r * th + 3.1611 * l * ts * ts + 19.8621 * r * th * th;
    let g = vec![
        -ts + 0.01932 * r,
        -th + 0.00954 * r,
        -PI * r * r * l - 4.0 / 3.0 * PI * r.powi(3) + 750.0 * 1728.0,
        -240.0 + l,
    ];
    Response::constrained(f, g)
}

pub const PRESSURE_VESSEL_LOWER: [f64; 4] = [10.0, 1e-8, 0.0625, 0.0625];
pub const PRESSURE_VESSEL_UPPER: [f64; 4] = [50.0, 200.0, 6.1875, 6.1875];

/// Plate thicknesses available to the mixed-integer vessel: `k * 0.0625`.
pub fn thickness_values() -> Vec<f64> {
    (1..=99).map(|k| k as f64 * 0.0625).collect()
}

/// `[d, D, N]`: wire diameter, coil diameter, active coils.
pub fn spring(x: &[f64]) -> Response {
    let (d, dc, n) = (x[0], x[1], x[2]);
    let f = (n + 2.0) * dc * d * d;
    let g = vec![
        1.0 - dc.powi(3) * n / (71785.0 * d.powi(4)),
        (4.0 * dc * dc - d * dc) / (12566.0 * (dc * d.powi(3) - d.powi(4))) + 1.0 / (5108.0 * d * d) - 1.0,
        1.0 - 140.45 * d / (dc * dc * n),
        (dc + d) / 1.5 - 1.0,
    ];
    Response::constrained(f, g)
}

pub const SPRING_LOWER: [f64; 3] = [0.05, 0.25, 2.0];
pub const SPRING_UPPER: [f64; 3] = [2.0, 1.3, 15.0];

/// `[h, l, t, b]`: weld thickness, weld length, bar height, bar thickness.
pub fn welded_beam(x: &[f64]) -> Response {
    let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
    let (p, len, e, g_mod) = (6000.0, 14.0, 30e6, 12e6);
    let tau_p = p / (2f64.sqrt() * h * l);
    let m = p * (len + l / 2.0);
    let r = (l * l / 4.0 + ((h + t) / 2.0).powi(2)).sqrt();
    let j = 2.0 * (2f64.sqrt() * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2)));
    let tau_pp = m * r / j;
    let tau = (tau_p * tau_p + 2.0 * tau_p * tau_pp * l / (2.0 * r) + tau_pp * tau_pp).sqrt();
    let sigma = 6.0 * p * len / (b * t * t);
    let delta = 4.0 * p * len.powi(3) / (e * t.powi(3) * b);
    let pc = 4.013 * e * (t * t * b.powi(6) / 36.0).sqrt() / (len * len)
        * (1.0 - t / (2.0 * len) * (e / (4.0 * g_mod)).sqrt());
    let f = 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l);
    let g = vec![
        tau - 13600.0,
        sigma - 30000.0,
        h - b,
        0.10471 * h * h + 0.04811 * t * b * (14.0 + l) - 5.0,
        0.125 - h,
        delta - 0.25,
        p - pc,
    ];
    Response::constrained(f, g)
}

pub const WELDED_BEAM_LOWER: [f64; 4] = [0.1, 0.1, 0.1, 0.1];
pub const WELDED_BEAM_UPPER: [f64; 4] = [2.0, 10.0, 10.0, 2.0];

/// Golinski's speed reducer, `x1..x7`.
pub fn speed_reducer(x: &[f64]) -> Response {
    let (x1, x2, x3, x4, x5, x6, x7) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6]);
    let f = 0.7854 * x1 * x2 * x2 * (3.3333 * x3 * x3 + 14.9334 * x3 - 43.0934)
        - 1.508 * x1 * (x6 * x6 + x7 * x7)
        + 7.4777 * (x6.powi(3) + x7.powi(3))
        + 0.7854 * (x4 * x6 * x6 + x5 * x7 * x7);
    let g = vec![
        27.0 / (x1 * x2 * x2 * x3) - 1.0,
        397.5 / (x1 * x2 * x2 * x3 * x3) - 1.0,
        1.93 * x4.powi(3) / (x2 * x3 * x6.powi(4)) - 1.0,
        1.93 * x5.powi(3) / (x2 * x3 * x7.powi(4)) - 1.0,
        ((745.0 * x4 / (x2 * x3)).powi(2) + 16.9e6).sqrt() / (110.0 * x6.powi(3)) - 1.0,
        ((745.0 * x5 / (x2 * x3)).powi(2) + 157.5e6).sqrt() / (85.0 * x7.powi(3)) - 1.0,
        x2 * x3 / 40.0 - 1.0,
        5.0 * x2 / x1 - 1.0,
        x1 / (12.0 * x2) - 1.0,
        (1.5 * x6 + 1.9) / x4 - 1.0,
        (1.1 * x7 + 1.9) / x5 - 1.0,
    ];
    Response::constrained(f, g)
}

pub const SPEED_REDUCER_LOWER: [f64; 7] = [2.6, 0.7, 17.0, 7.3, 7.3, 2.9, 5.0];
pub const SPEED_REDUCER_UPPER: [f64; 7] = [3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5];

/// Standard wire gauges for the mixed-integer spring.
pub const MI_SPRING_WIRE: [f64; 42] = [
    0.009, 0.0095, 0.0104, 0.0118, 0.0128, 0.0132, 0.014, 0.015, 0.0162, 0.0173, 0.018, 0.020,
    0.023, 0.025, 0.028, 0.032, 0.035, 0.041, 0.047, 0.054, 0.063, 0.072, 0.080, 0.092, 0.105,
    0.120, 0.135, 0.148, 0.162, 0.177, 0.192, 0.207, 0.225, 0.244, 0.263, 0.283, 0.307, 0.331,
    0.362, 0.394, 0.4375, 0.5,
];

/// `[N, D, d]`: coils (integer), coil diameter, wire diameter (from the gauge table).
pub fn mi_spring(x: &[f64]) -> Response {
    let (n, dc, d) = (x[0], x[1], x[2]);
    let (f_max, s, l_max, d_min, d_max, f_p, sigma_pm, sigma_w, g_mod) =
        (1000.0, 189_000.0, 14.0, 0.2, 3.0, 300.0, 6.0, 1.25, 11.5e6);
    let c = dc / d;
    let cf = (4.0 * c - 1.0) / (4.0 * c - 4.0) + 0.615 / c;
    let k = g_mod * d.powi(4) / (8.0 * n * dc.powi(3));
    let sigma_p = f_p / k;
    let l_f = f_max / k + 1.05 * (n + 2.0) * d;
    let f = PI * PI * dc * d * d * (n + 2.0) / 4.0;
    let g = vec![
        8.0 * cf * f_max * dc / (PI * d.powi(3)) - s,
        l_f - l_max,
        d_min - d,
        dc + d - d_max,
        3.0 - c,
        sigma_p - sigma_pm,
        sigma_p + (f_max - f_p) / k + 1.05 * (n + 2.0) * d - l_f,
        sigma_w - (f_max - f_p) / k,
    ];
    Response::constrained(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vessel_wall_constraint() {
        // R = 50 needs t_s >= 0.966
        let at = |ts: f64| pressure_vessel(&[50.0, 100.0, ts, 1.0]).inequality[0];
        assert!(at(0.966) <= 1e-12);
        assert!(at(0.96) > 0.0);
        assert_eq!(pressure_vessel(&[40.0, 240.0, 1.0, 1.0]).inequality[3], 0.0);
    }

    #[test]
    fn thickness_grid() {
        let v = thickness_values();
        assert_eq!(v.len(), 99);
        assert_eq!(v[2], 0.1875);
        assert_eq!(*v.last().unwrap(), 6.1875);
    }
}

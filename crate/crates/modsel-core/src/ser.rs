//! Symbol-error-rate bounds, their fading averages, and SNR inversions.
//!
//! Each scheme carries a conditional error kernel of the form
//! `c * exp(-a * gamma)` (for NC-MFSK and OOK it is the pairwise kernel
//! `0.5 * exp(-gamma/2)` composed as `1 - (1 - p2)^(M-1)`). Averaging the
//! kernel over the fading distribution gives the scheme's average-SER upper
//! bound; under Rayleigh this reproduces the familiar closed forms, e.g.
//! `1 - (1 - 1/(2+snr))^(M-1)` for NC-MFSK and `1/(snr+2)` for OOK.
//!
//! Two independent averaging routes are provided: the moment-generating
//! function of the faded SNR (closed form) and adaptive-Simpson quadrature
//! over the fading pdf. They must agree; tests enforce it.

use std::f64::consts::SQRT_2;

use crate::channel::FadingModel;
use crate::error::{Error, Result};
use crate::schemes::Scheme;

/// Default relative tolerance of the quadrature route.
pub const QUADRATURE_REL_TOL: f64 = 1e-6;

/// Error-kernel shape of a scheme's SER bound.
enum Kernel {
    /// `1 - (1 - 0.5*mgf(1/2))^branches` (orthogonal signalling, pairwise).
    Orthogonal { branches: u32 },
    /// `c * mgf(a)`.
    Scaled { c: f64, a: f64 },
}

fn kernel(scheme: &Scheme) -> Kernel {
    match *scheme {
        Scheme::NcMfsk { m, .. } => Kernel::Orthogonal { branches: m - 1 },
        Scheme::Ook { .. } => Kernel::Orthogonal { branches: 1 },
        Scheme::Mqam { m } => {
            let rm = (m as f64).sqrt();
            Kernel::Scaled { c: 2.0 * (1.0 - 1.0 / rm), a: 3.0 / (2.0 * (m as f64 - 1.0)) }
        }
        Scheme::DiffOqpsk => {
            Kernel::Scaled { c: ((1.0 + SQRT_2) / 2.0).sqrt(), a: (2.0 - SQRT_2) / 4.0 }
        }
    }
}

/// `E[exp(-a * gamma)]` for instantaneous SNR `gamma` with mean `gamma_bar`
/// under the given fading model.
pub fn snr_mgf(fading: &FadingModel, a: f64, gamma_bar: f64) -> f64 {
    match *fading {
        FadingModel::Rayleigh { .. } => 1.0 / (1.0 + a * gamma_bar),
        FadingModel::Rician { .. } => {
            let k = fading.k_linear();
            let denom = 1.0 + k + a * gamma_bar;
            ((1.0 + k) / denom) * (-k * a * gamma_bar / denom).exp()
        }
    }
}

fn compose(kernel: &Kernel, fading: &FadingModel, gamma_bar: f64) -> f64 {
    let raw = match *kernel {
        Kernel::Orthogonal { branches } => {
            let p2 = 0.5 * snr_mgf(fading, 0.5, gamma_bar);
            -((branches as f64) * (-p2).ln_1p()).exp_m1()
        }
        Kernel::Scaled { c, a } => c * snr_mgf(fading, a, gamma_bar),
    };
    raw.clamp(0.0, 1.0)
}

/// Average SER upper bound of the scheme under the given fading model.
///
/// The Rayleigh arm equals [`ser_bound`] identically.
pub fn average_ser_bound(scheme: &Scheme, gamma_bar: f64, fading: &FadingModel) -> f64 {
    compose(&kernel(scheme), fading, gamma_bar)
}

/// Rayleigh average SER upper bound, clamped to `[0, 1]`.
pub fn ser_bound(scheme: &Scheme, gamma_bar: f64) -> f64 {
    average_ser_bound(scheme, gamma_bar, &FadingModel::Rayleigh { omega: 1.0 })
}

/// Bound value at zero SNR before clamping; targets must lie strictly below
/// both this and 1.
pub fn zero_snr_limit(scheme: &Scheme) -> f64 {
    match *scheme {
        Scheme::NcMfsk { m, .. } => -((m as f64 - 1.0) * 0.5f64.ln()).exp_m1(),
        Scheme::Ook { .. } => 0.5,
        Scheme::Mqam { m } => 2.0 * (1.0 - 1.0 / (m as f64).sqrt()),
        Scheme::DiffOqpsk => ((1.0 + SQRT_2) / 2.0).sqrt(),
    }
}

fn validate_target(scheme: &Scheme, p_s: f64) -> Result<()> {
    let limit = zero_snr_limit(scheme).min(1.0);
    if !(p_s > 0.0 && p_s < limit) || !p_s.is_finite() {
        return Err(Error::UnattainableTarget { target: p_s, limit });
    }
    Ok(())
}

/// Closed-form Rayleigh inversion: the average SNR at which the scheme's
/// bound equals `p_s`.
pub fn required_snr_rayleigh(scheme: &Scheme, p_s: f64) -> Result<f64> {
    validate_target(scheme, p_s)?;
    Ok(match *scheme {
        Scheme::NcMfsk { m: 2, .. } | Scheme::Ook { .. } => 1.0 / p_s - 2.0,
        Scheme::NcMfsk { m, .. } => {
            let x = -((-p_s).ln_1p() / (m as f64 - 1.0)).exp_m1();
            1.0 / x - 2.0
        }
        Scheme::Mqam { m } => {
            let mf = m as f64;
            (2.0 * (mf - 1.0) / 3.0) * (2.0 * (1.0 - 1.0 / mf.sqrt()) / p_s - 1.0)
        }
        Scheme::DiffOqpsk => {
            let c = ((1.0 + SQRT_2) / 2.0).sqrt();
            (4.0 * c / p_s - 4.0) / (2.0 - SQRT_2)
        }
    })
}

/// Bisection inversion of [`average_ser_bound`] in `gamma_bar`; works for
/// any fading model and reduces to the closed form in the Rayleigh limit.
///
/// `rel_tol` is the relative width of the final bracket.
pub fn invert_average_ser_bound(
    scheme: &Scheme,
    p_s: f64,
    fading: &FadingModel,
    rel_tol: f64,
) -> Result<f64> {
    validate_target(scheme, p_s)?;
    if !rel_tol.is_finite() || rel_tol <= 0.0 {
        return Err(Error::InvalidParameter("rel_tol must be > 0".into()));
    }
    let f = |g: f64| average_ser_bound(scheme, g, fading);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut guard = 0;
    while f(hi) > p_s {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence(format!(
                "no upper bracket for target {p_s} below gamma_bar = {hi}"
            )));
        }
    }
    for _ in 0..512 {
        // bound is decreasing: f(lo) >= p_s >= f(hi) holds at every step
        debug_assert!(f(lo) >= p_s && f(hi) <= p_s);
        let mid = 0.5 * (lo + hi);
        if f(mid) >= p_s {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::NonConvergence(format!("bisection budget exhausted for target {p_s}")))
}

// ---------------------------------------------------------------------------
// Quadrature route (independent of the MGF algebra)
// ---------------------------------------------------------------------------

/// `exp(-t) * I0(t)` for `t >= 0` (Abramowitz & Stegun 9.8.1/9.8.2).
fn bessel_i0_scaled(t: f64) -> f64 {
    if t < 3.75 {
        let y = (t / 3.75) * (t / 3.75);
        let p = 1.0
            + y * (3.5156229
                + y * (3.0899424
                    + y * (1.2067492 + y * (0.2659732 + y * (0.0360768 + y * 0.0045813)))));
        p * (-t).exp()
    } else {
        let u = 3.75 / t;
        let p = 0.39894228
            + u * (0.01328592
                + u * (0.00225319
                    + u * (-0.00157565
                        + u * (0.00916281
                            + u * (-0.02057706
                                + u * (0.02635537 + u * (-0.01647633 + u * 0.00392377)))))));
        p / t.sqrt()
    }
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5 * eps, depth - 1)
            + adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5 * eps, depth - 1)
    }
}

/// `E[exp(-a * gamma)]` computed by integrating over the fading pdf of the
/// normalized power `x = |h|^2 / omega` (adaptive Simpson).
pub fn snr_mgf_quadrature(fading: &FadingModel, a: f64, gamma_bar: f64, rel_tol: f64) -> f64 {
    let k = fading.k_linear();
    let integrand = move |x: f64| {
        let arg = ((1.0 + k) * x).sqrt();
        let t = 2.0 * (k * (1.0 + k) * x).sqrt();
        (1.0 + k)
            * (-a * gamma_bar * x - (k.sqrt() - arg) * (k.sqrt() - arg)).exp()
            * bessel_i0_scaled(t)
    };
    // fading tail alone is below e^-75 past x_max; the exp(-a*gamma*x)
    // factor only shrinks it further
    let x_max = (k.sqrt() + 75f64.sqrt()).powi(2) / (1.0 + k);
    // scale the absolute Simpson tolerance by a crude magnitude estimate
    let scale = snr_mgf(fading, a, gamma_bar).max(1e-300);
    // coarse pre-partition so a narrow interior peak (strong LOS pushes the
    // density away from both endpoints) cannot hide from the first probes
    let panels = 64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = x_max * i as f64 / panels as f64;
        let hi = x_max * (i + 1) as f64 / panels as f64;
        let (fa, fb) = (integrand(lo), integrand(hi));
        let fm = integrand(0.5 * (lo + hi));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(
            &integrand,
            lo,
            hi,
            fa,
            fb,
            fm,
            whole,
            rel_tol * scale / panels as f64,
            40,
        );
    }
    total
}

/// Average SER bound via the quadrature route.
pub fn average_ser_bound_quadrature(
    scheme: &Scheme,
    gamma_bar: f64,
    fading: &FadingModel,
    rel_tol: f64,
) -> f64 {
    let raw = match kernel(scheme) {
        Kernel::Orthogonal { branches } => {
            let p2 = 0.5 * snr_mgf_quadrature(fading, 0.5, gamma_bar, rel_tol);
            -((branches as f64) * (-p2).ln_1p()).exp_m1()
        }
        Kernel::Scaled { c, a } => c * snr_mgf_quadrature(fading, a, gamma_bar, rel_tol),
    };
    raw.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ray() -> FadingModel {
        FadingModel::Rayleigh { omega: 1.0 }
    }

    // Textbook closed forms written out independently of the kernel plumbing.
    fn closed_form(scheme: &Scheme, g: f64) -> f64 {
        match *scheme {
            Scheme::NcMfsk { m, .. } => 1.0 - (1.0 - 1.0 / (2.0 + g)).powi(m as i32 - 1),
            Scheme::Mqam { m } => {
                let mf = m as f64;
                4.0 * (mf - 1.0) / (3.0 * g + 2.0 * (mf - 1.0)) * (1.0 - 1.0 / mf.sqrt())
            }
            Scheme::DiffOqpsk => {
                ((1.0 + SQRT_2) / 2.0).sqrt() * 4.0 / ((2.0 - SQRT_2) * g + 4.0)
            }
            Scheme::Ook { .. } => 1.0 / (g + 2.0),
        }
    }

    #[test]
    fn bound_reference_points() {
        assert_relative_eq!(ser_bound(&Scheme::nc_mfsk(2).unwrap(), 0.0), 0.5);
        assert_relative_eq!(
            ser_bound(&Scheme::nc_mfsk(2).unwrap(), 998.0),
            1e-3,
            max_relative = 1e-12
        );
        assert_relative_eq!(ser_bound(&Scheme::ook().unwrap(), 998.0), 1e-3, max_relative = 1e-12);
        assert_relative_eq!(
            ser_bound(&Scheme::mqam(4).unwrap(), 1998.0),
            1e-3,
            max_relative = 1e-12
        );
    }

    #[test]
    fn bound_matches_textbook_forms_under_rayleigh() {
        let schemes = [
            Scheme::nc_mfsk(2).unwrap(),
            Scheme::nc_mfsk(16).unwrap(),
            Scheme::mqam(4).unwrap(),
            Scheme::mqam(43).unwrap(),
            Scheme::diff_oqpsk(),
            Scheme::ook().unwrap(),
        ];
        for s in &schemes {
            for g in [0.0, 0.7, 10.0, 998.0, 3.3e4] {
                let direct = closed_form(s, g).clamp(0.0, 1.0);
                assert_relative_eq!(ser_bound(s, g), direct, max_relative = 1e-10);
                assert_relative_eq!(
                    average_ser_bound(s, g, &ray()),
                    direct,
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn oqpsk_bound_clamps_at_zero_snr() {
        let raw = zero_snr_limit(&Scheme::diff_oqpsk());
        assert!(raw > 1.0 && raw < 1.1);
        assert_eq!(ser_bound(&Scheme::diff_oqpsk(), 0.0), 1.0);
    }

    #[test]
    fn bound_decreasing_in_snr_and_increasing_in_m() {
        let m16 = Scheme::nc_mfsk(16).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let g = 0.5 * i as f64;
            let p = ser_bound(&m16, g);
            assert!(p < prev || (p == 1.0 && prev == 1.0));
            prev = p;
        }
        for g in [1.0, 10.0, 100.0] {
            let mut prev = 0.0;
            for m in [2u32, 4, 8, 16, 32, 64] {
                let p = ser_bound(&Scheme::nc_mfsk(m).unwrap(), g);
                assert!(p > prev, "bound not increasing in M at snr {g}");
                prev = p;
            }
        }
    }

    #[test]
    fn closed_form_inversion_round_trips() {
        let schemes = [
            Scheme::nc_mfsk(2).unwrap(),
            Scheme::nc_mfsk(64).unwrap(),
            Scheme::mqam(4).unwrap(),
            Scheme::mqam(64).unwrap(),
            Scheme::diff_oqpsk(),
            Scheme::ook().unwrap(),
        ];
        for s in &schemes {
            for p in [1e-2, 1e-3, 1e-4] {
                let g = required_snr_rayleigh(s, p).unwrap();
                assert_relative_eq!(ser_bound(s, g), p, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn inversion_rejects_unattainable_targets() {
        assert!(required_snr_rayleigh(&Scheme::nc_mfsk(2).unwrap(), 0.5).is_err());
        assert!(required_snr_rayleigh(&Scheme::nc_mfsk(2).unwrap(), 0.6).is_err());
        assert!(required_snr_rayleigh(&Scheme::ook().unwrap(), 0.5).is_err());
        assert!(required_snr_rayleigh(&Scheme::mqam(4).unwrap(), 1.0).is_err());
        assert!(required_snr_rayleigh(&Scheme::diff_oqpsk(), 0.0).is_err());
        assert!(required_snr_rayleigh(&Scheme::diff_oqpsk(), 0.9).is_ok());
    }

    #[test]
    fn bisection_matches_closed_form_in_rayleigh_limit() {
        for s in [Scheme::nc_mfsk(4).unwrap(), Scheme::mqam(16).unwrap(), Scheme::ook().unwrap()] {
            let closed = required_snr_rayleigh(&s, 1e-3).unwrap();
            let num = invert_average_ser_bound(&s, 1e-3, &ray(), 1e-12).unwrap();
            assert_relative_eq!(num, closed, max_relative = 1e-9);
            // a very low-K Rician is the same channel
            let almost_ray = FadingModel::rician(-120.0, 1.0).unwrap();
            let num = invert_average_ser_bound(&s, 1e-3, &almost_ray, 1e-12).unwrap();
            assert_relative_eq!(num, closed, max_relative = 1e-6);
        }
    }

    #[test]
    fn rician_requires_less_snr_and_is_monotone_in_k() {
        for s in [Scheme::nc_mfsk(4).unwrap(), Scheme::mqam(64).unwrap(), Scheme::diff_oqpsk()] {
            let ray_snr = required_snr_rayleigh(&s, 1e-3).unwrap();
            let mut prev = ray_snr;
            for k_db in [1.0, 10.0, 15.0] {
                let f = FadingModel::rician(k_db, 1.0).unwrap();
                let g = invert_average_ser_bound(&s, 1e-3, &f, 1e-10).unwrap();
                assert!(g <= prev, "required snr must not grow with K");
                prev = g;
            }
        }
    }

    #[test]
    fn quadrature_agrees_with_mgf() {
        for k_db in [-120.0, 1.0, 10.0, 15.0] {
            let fading = if k_db < -100.0 {
                ray()
            } else {
                FadingModel::rician(k_db, 1.0).unwrap()
            };
            for a in [0.5, (2.0 - SQRT_2) / 4.0, 3.0 / 126.0] {
                for g in [3.0, 40.0, 1000.0, 4.7e4] {
                    let exact = snr_mgf(&fading, a, g);
                    let quad = snr_mgf_quadrature(&fading, a, g, QUADRATURE_REL_TOL);
                    assert_relative_eq!(quad, exact, max_relative = 1e-4);
                }
            }
        }
    }

    #[test]
    fn quadrature_composite_bound_agrees() {
        let fading = FadingModel::rician(10.0, 1.0).unwrap();
        for s in [Scheme::nc_mfsk(8).unwrap(), Scheme::mqam(16).unwrap(), Scheme::diff_oqpsk()] {
            for g in [10.0, 200.0, 5000.0] {
                let a = average_ser_bound(&s, g, &fading);
                let b = average_ser_bound_quadrature(&s, g, &fading, QUADRATURE_REL_TOL);
                assert_relative_eq!(a, b, max_relative = 1e-4);
            }
        }
    }
}

//! Height functions h(x) describing the corrugated surface.
//!
//! Profiles are immutable; rescaling and vertical shifts produce new values.
//! The sawtooth replaces its two corners per period by a pair of cubic
//! Hermite arcs pinned at the corner with zero slope, so h is C¹ while the
//! extrema keep their exact positions and values.

use crate::error::{Error, Result};

/// Parametric corrugation profile with analytic height and slope.
#[derive(Debug, Clone, PartialEq)]
pub enum HeightProfile {
    Planar,
    Sine {
        amplitude: f64,
        omega: f64,
        phase: f64,
        /// vertical offset, zero for user-constructed profiles
        offset: f64,
    },
    Sawtooth {
        amplitude: f64,
        wavelength: f64,
        /// corner smoothing half-width
        smoothing: f64,
        offset: f64,
    },
    Tabulated(TabulatedProfile),
}

impl HeightProfile {
    pub fn planar() -> Self {
        HeightProfile::Planar
    }

    /// h(x) = A·sin(ωx + φ)
    pub fn sine(amplitude: f64, omega: f64, phase: f64) -> Result<Self> {
        if !(amplitude > 0.0) || !(omega > 0.0) || !phase.is_finite() {
            return Err(Error::Config(format!(
                "sine profile needs amplitude > 0, omega > 0, finite phase (got A={amplitude}, omega={omega}, phase={phase})"
            )));
        }
        Ok(HeightProfile::Sine {
            amplitude,
            omega,
            phase,
            offset: 0.0,
        })
    }

    /// Periodic tooth rising from h(0)=0 to A at 0.8λ and dropping back to 0
    /// at λ, with corners smoothed over half-width `smoothing`.
    pub fn sawtooth(amplitude: f64, wavelength: f64, smoothing: f64) -> Result<Self> {
        if !(amplitude > 0.0) || !(wavelength > 0.0) {
            return Err(Error::Config(format!(
                "sawtooth profile needs amplitude > 0 and wavelength > 0 (got A={amplitude}, lambda={wavelength})"
            )));
        }
        if !(smoothing > 0.0) || smoothing >= 0.1 * wavelength {
            return Err(Error::Config(format!(
                "sawtooth smoothing half-width must lie in (0, 0.1*wavelength); got {smoothing} for wavelength {wavelength}"
            )));
        }
        Ok(HeightProfile::Sawtooth {
            amplitude,
            wavelength,
            smoothing,
            offset: 0.0,
        })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        Ok(HeightProfile::Tabulated(TabulatedProfile::new(points)?))
    }

    /// Parses two-column text (x, h); whitespace or comma separated, `#` comments.
    pub fn tabulated_from_text(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(Error::Parse(format!(
                    "table line {}: expected two columns, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let x: f64 = fields[0]
                .parse()
                .map_err(|e| Error::Parse(format!("table line {}: {e}", lineno + 1)))?;
            let h: f64 = fields[1]
                .parse()
                .map_err(|e| Error::Parse(format!("table line {}: {e}", lineno + 1)))?;
            points.push((x, h));
        }
        Self::tabulated(points)
    }

    /// Surface height at x.
    pub fn height(&self, x: f64) -> Result<f64> {
        match self {
            HeightProfile::Planar => Ok(0.0),
            HeightProfile::Sine {
                amplitude,
                omega,
                phase,
                offset,
            } => Ok(amplitude * (omega * x + phase).sin() + offset),
            HeightProfile::Sawtooth { .. } => Ok(self.sawtooth_eval(x).0),
            HeightProfile::Tabulated(t) => t.height(x),
        }
    }

    /// Surface slope h'(x), analytic for every profile kind.
    pub fn slope(&self, x: f64) -> Result<f64> {
        match self {
            HeightProfile::Planar => Ok(0.0),
            HeightProfile::Sine {
                amplitude,
                omega,
                phase,
                ..
            } => Ok(amplitude * omega * (omega * x + phase).cos()),
            HeightProfile::Sawtooth { .. } => Ok(self.sawtooth_eval(x).1),
            HeightProfile::Tabulated(t) => t.slope(x),
        }
    }

    /// Induced-metric factor √(1 + h'(x)²) ≥ 1.
    pub fn metric_factor(&self, x: f64) -> Result<f64> {
        let s = self.slope(x)?;
        Ok((1.0 + s * s).sqrt())
    }

    /// Dimensionless rescaling h̃(x̃) = h(x̃·scale)/scale.
    pub fn rescale(&self, scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::Domain(format!(
                "rescale needs a positive scale, got {scale}"
            )));
        }
        Ok(match self {
            HeightProfile::Planar => HeightProfile::Planar,
            HeightProfile::Sine {
                amplitude,
                omega,
                phase,
                offset,
            } => HeightProfile::Sine {
                amplitude: amplitude / scale,
                omega: omega * scale,
                phase: *phase,
                offset: offset / scale,
            },
            HeightProfile::Sawtooth {
                amplitude,
                wavelength,
                smoothing,
                offset,
            } => HeightProfile::Sawtooth {
                amplitude: amplitude / scale,
                wavelength: wavelength / scale,
                smoothing: smoothing / scale,
                offset: offset / scale,
            },
            HeightProfile::Tabulated(t) => HeightProfile::Tabulated(t.rescaled(scale)),
        })
    }

    /// Vertical shift h(x) + dy. Planar profiles only ever see dy = 0.
    pub(crate) fn shifted(&self, dy: f64) -> Self {
        match self {
            HeightProfile::Planar => {
                debug_assert_eq!(dy, 0.0);
                HeightProfile::Planar
            }
            HeightProfile::Sine {
                amplitude,
                omega,
                phase,
                offset,
            } => HeightProfile::Sine {
                amplitude: *amplitude,
                omega: *omega,
                phase: *phase,
                offset: offset + dy,
            },
            HeightProfile::Sawtooth {
                amplitude,
                wavelength,
                smoothing,
                offset,
            } => HeightProfile::Sawtooth {
                amplitude: *amplitude,
                wavelength: *wavelength,
                smoothing: *smoothing,
                offset: offset + dy,
            },
            HeightProfile::Tabulated(t) => HeightProfile::Tabulated(t.shifted(dy)),
        }
    }

    /// Adds a lateral phase; only meaningful for sine corrugations.
    pub fn with_added_phase(&self, dphi: f64) -> Result<Self> {
        if dphi == 0.0 {
            return Ok(self.clone());
        }
        match self {
            HeightProfile::Sine {
                amplitude,
                omega,
                phase,
                offset,
            } => Ok(HeightProfile::Sine {
                amplitude: *amplitude,
                omega: *omega,
                phase: phase + dphi,
                offset: *offset,
            }),
            _ => Err(Error::Config(
                "lateral phase shifts are only supported for sine profiles".into(),
            )),
        }
    }

    /// Wavelength of the dominant corrugation, used by the resolution guard.
    pub fn dominant_wavelength(&self) -> Option<f64> {
        match self {
            HeightProfile::Planar | HeightProfile::Tabulated(_) => None,
            HeightProfile::Sine { omega, .. } => Some(2.0 * std::f64::consts::PI / omega),
            HeightProfile::Sawtooth { wavelength, .. } => Some(*wavelength),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            HeightProfile::Planar => "planar",
            HeightProfile::Sine { .. } => "sine",
            HeightProfile::Sawtooth { .. } => "sawtooth",
            HeightProfile::Tabulated(_) => "tabulated",
        }
    }

    /// (height, slope) of the smoothed sawtooth.
    fn sawtooth_eval(&self, x: f64) -> (f64, f64) {
        let HeightProfile::Sawtooth {
            amplitude: a,
            wavelength: lam,
            smoothing: delta,
            offset,
        } = self
        else {
            unreachable!()
        };
        let u = x.rem_euclid(*lam);
        let rise = 0.8 * lam;
        let s_up = a / rise; // gentle rising slope
        let s_down = -a / (0.2 * lam); // steep falling slope

        // corner blends: (position, corner value, incoming slope, outgoing slope)
        let corners = [(0.0, 0.0, s_down, s_up), (rise, *a, s_up, s_down)];
        for &(cu, cv, s_in, s_out) in &corners {
            // periodic distance from the corner in [-lam/2, lam/2)
            let mut t = u - cu;
            if t >= 0.5 * lam {
                t -= lam;
            } else if t < -0.5 * lam {
                t += lam;
            }
            if t >= -delta && t < 0.0 {
                let (v, d) = hermite_pinned(cv - s_in * delta, s_in * delta, cv, 0.0, (t + delta) / delta);
                return (v + offset, d / delta);
            }
            if (0.0..=*delta).contains(&t) {
                let (v, d) = hermite_pinned(cv, 0.0, cv + s_out * delta, s_out * delta, t / delta);
                return (v + offset, d / delta);
            }
        }

        if u <= rise {
            (s_up * u + offset, s_up)
        } else {
            (a + s_down * (u - rise) + offset, s_down)
        }
    }
}

/// Cubic Hermite on s ∈ [0,1] with endpoint values v0, v1 and endpoint
/// derivatives d0, d1 (already scaled to the unit interval).
fn hermite_pinned(v0: f64, d0: f64, v1: f64, d1: f64, s: f64) -> (f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    let v = (2.0 * s3 - 3.0 * s2 + 1.0) * v0
        + (s3 - 2.0 * s2 + s) * d0
        + (-2.0 * s3 + 3.0 * s2) * v1
        + (s3 - s2) * d1;
    let d = (6.0 * s2 - 6.0 * s) * v0
        + (3.0 * s2 - 4.0 * s + 1.0) * d0
        + (-6.0 * s2 + 6.0 * s) * v1
        + (3.0 * s2 - 2.0 * s) * d1;
    (v, d)
}

/// Monotone cubic (Fritsch-Carlson) interpolant over strictly increasing x.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    xs: Vec<f64>,
    hs: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedProfile {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Config(
                "tabulated profile needs at least two points".into(),
            ));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Config(format!(
                    "tabulated x values must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let hs: Vec<f64> = points.iter().map(|p| p.1).collect();
        let n = xs.len();
        let mut secants = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            secants.push((hs[i + 1] - hs[i]) / (xs[i + 1] - xs[i]));
        }
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            if secants[i - 1] * secants[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                slopes[i] = 0.5 * (secants[i - 1] + secants[i]);
            }
        }
        // Fritsch-Carlson limiter keeps the interpolant monotone per cell
        for i in 0..n - 1 {
            if secants[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
            } else {
                let alpha = slopes[i] / secants[i];
                let beta = slopes[i + 1] / secants[i];
                let r = alpha * alpha + beta * beta;
                if r > 9.0 {
                    let tau = 3.0 / r.sqrt();
                    slopes[i] = tau * alpha * secants[i];
                    slopes[i + 1] = tau * beta * secants[i];
                }
            }
        }
        Ok(TabulatedProfile { xs, hs, slopes })
    }

    fn cell(&self, x: f64) -> Result<usize> {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return Err(Error::Domain(format!(
                "x = {x} outside tabulated range [{}, {}]",
                self.xs[0],
                self.xs[n - 1]
            )));
        }
        let i = self.xs.partition_point(|&v| v <= x);
        Ok(i.clamp(1, n - 1) - 1)
    }

    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let i = self.cell(x)?;
        let dx = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / dx;
        let (v, d) = hermite_pinned(
            self.hs[i],
            self.slopes[i] * dx,
            self.hs[i + 1],
            self.slopes[i + 1] * dx,
            s,
        );
        Ok((v, d / dx))
    }

    pub fn height(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.0)
    }

    pub fn slope(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.1)
    }

    fn rescaled(&self, scale: f64) -> Self {
        TabulatedProfile {
            xs: self.xs.iter().map(|x| x / scale).collect(),
            hs: self.hs.iter().map(|h| h / scale).collect(),
            slopes: self.slopes.clone(),
        }
    }

    fn shifted(&self, dy: f64) -> Self {
        TabulatedProfile {
            xs: self.xs.clone(),
            hs: self.hs.iter().map(|h| h + dy).collect(),
            slopes: self.slopes.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    #[test]
    fn sine_examples() {
        let p = HeightProfile::sine(1.0, 1.0, -FRAC_PI_2).unwrap();
        assert_relative_eq!(p.height(0.0).unwrap(), -1.0);
        let p = HeightProfile::sine(1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(p.slope(0.0).unwrap(), 1.0);
        assert_relative_eq!(p.metric_factor(0.0).unwrap(), SQRT_2);
        let p = HeightProfile::sine(1.0, 2.0, 0.0).unwrap();
        assert_relative_eq!(p.metric_factor(0.0).unwrap(), 5.0f64.sqrt());
    }

    #[test]
    fn planar_is_flat() {
        let p = HeightProfile::planar();
        assert_eq!(p.height(17.3).unwrap(), 0.0);
        assert_eq!(p.slope(17.3).unwrap(), 0.0);
        assert_eq!(p.metric_factor(-4.0).unwrap(), 1.0);
    }

    #[test]
    fn sawtooth_extrema_exact() {
        let lam = 2.8;
        let p = HeightProfile::sawtooth(1.0, lam, 0.05 * lam).unwrap();
        assert_relative_eq!(p.height(0.8 * lam).unwrap(), 1.0);
        assert_relative_eq!(p.height(0.0).unwrap(), 0.0);
        assert_eq!(p.slope(0.0).unwrap(), 0.0);
        assert_eq!(p.slope(0.8 * lam).unwrap(), 0.0);
        // periodicity
        assert_relative_eq!(
            p.height(0.3 * lam).unwrap(),
            p.height(0.3 * lam + 3.0 * lam).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn sawtooth_mid_rise_slope() {
        let lam = 2.8;
        let p = HeightProfile::sawtooth(1.0, lam, 0.01 * lam).unwrap();
        assert_relative_eq!(p.slope(0.4 * lam).unwrap(), 1.0 / (0.8 * lam), max_relative = 1e-12);
    }

    #[test]
    fn sawtooth_matches_linear_outside_blend() {
        let lam = 2.8;
        let delta = 0.05 * lam;
        let p = HeightProfile::sawtooth(1.0, lam, delta).unwrap();
        let linear = |u: f64| {
            if u <= 0.8 * lam {
                u / (0.8 * lam)
            } else {
                (lam - u) / (0.2 * lam)
            }
        };
        for i in 0..200 {
            let u = lam * (i as f64 + 0.5) / 200.0;
            let near_corner = (u - 0.0).abs() < delta
                || (u - 0.8 * lam).abs() < delta
                || (lam - u).abs() < delta;
            if !near_corner {
                assert_relative_eq!(p.height(u).unwrap(), linear(u), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn sawtooth_blend_is_c1_and_bounded() {
        let lam = 2.8;
        let delta = 0.05 * lam;
        let p = HeightProfile::sawtooth(1.0, lam, delta).unwrap();
        let mut min_h = f64::INFINITY;
        let mut max_h = f64::NEG_INFINITY;
        for i in 0..=5000 {
            let u = lam * i as f64 / 5000.0;
            let h = p.height(u).unwrap();
            min_h = min_h.min(h);
            max_h = max_h.max(h);
            // slope continuity against central differences
            let eps = 1e-7 * lam;
            let fd = (p.height(u + eps).unwrap() - p.height(u - eps).unwrap()) / (2.0 * eps);
            assert!((fd - p.slope(u).unwrap()).abs() < 1e-5);
        }
        assert_relative_eq!(min_h, 0.0, epsilon = 1e-12);
        assert_relative_eq!(max_h, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rescale_examples() {
        let p = HeightProfile::sine(1.0, 1.0, 0.3).unwrap().rescale(2.0).unwrap();
        match p {
            HeightProfile::Sine {
                amplitude, omega, ..
            } => {
                assert_relative_eq!(amplitude, 0.5);
                assert_relative_eq!(omega, 2.0);
            }
            _ => panic!("expected sine"),
        }
        let p = HeightProfile::planar().rescale(7.0).unwrap();
        assert_eq!(p, HeightProfile::Planar);
        let p = HeightProfile::sawtooth(1.0, 2.8, 0.14).unwrap().rescale(4.0).unwrap();
        match p {
            HeightProfile::Sawtooth {
                amplitude,
                wavelength,
                ..
            } => {
                assert_relative_eq!(amplitude, 0.25);
                assert_relative_eq!(wavelength, 0.7);
            }
            _ => panic!("expected sawtooth"),
        }
        assert!(HeightProfile::planar().rescale(0.0).is_err());
    }

    #[test]
    fn rescale_preserves_shape() {
        let p = HeightProfile::sine(0.7, 1.3, 0.4).unwrap();
        let s = 2.9;
        let r = p.rescale(s).unwrap();
        for i in 0..50 {
            let xt = -3.0 + 0.13 * i as f64;
            assert_relative_eq!(
                r.height(xt).unwrap() * s,
                p.height(xt * s).unwrap(),
                max_relative = 1e-12,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn metric_period_is_half_height_period() {
        let p = HeightProfile::sine(0.8, 1.7, 0.2).unwrap();
        let period = PI / 1.7;
        for i in 0..40 {
            let x = -2.0 + 0.37 * i as f64;
            assert_relative_eq!(
                p.metric_factor(x).unwrap(),
                p.metric_factor(x + period).unwrap(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn tabulated_interpolation() {
        let text = "0.0 0.0\n1.0, 1.0\n2.0 0.5\n3.0 0.5\n";
        let p = HeightProfile::tabulated_from_text(text).unwrap();
        assert_relative_eq!(p.height(1.0).unwrap(), 1.0);
        assert_relative_eq!(p.height(0.0).unwrap(), 0.0);
        // monotone on [0,1]: no overshoot above 1
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            let h = p.height(x).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&h));
        }
        assert!(p.height(3.5).is_err());
        assert!(p.height(-0.1).is_err());
    }

    #[test]
    fn tabulated_rejects_unsorted() {
        assert!(HeightProfile::tabulated(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(HeightProfile::tabulated(vec![(1.0, 0.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn phase_shift_only_for_sine() {
        let p = HeightProfile::sine(1.0, 1.0, 0.0).unwrap();
        assert!(p.with_added_phase(0.5).is_ok());
        assert!(HeightProfile::planar().with_added_phase(0.5).is_err());
        assert!(HeightProfile::planar().with_added_phase(0.0).is_ok());
    }
}

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{domain, range, Error, Result};
use crate::sum::Kahan;

const FIRST_ORDINATE: f64 = 14.134_725_141_734_693;

/// Ascending positive ordinates `γ` of nontrivial zeros `1/2 + iγ`, complete
/// up to `height`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroList {
    gammas: Vec<f64>,
    height: f64,
}

impl ZeroList {
    /// Build from ordinates already known to be valid. Entries above
    /// `height` are dropped.
    pub fn new(mut gammas: Vec<f64>, height: f64) -> Result<Self> {
        if !(height >= 0.0) {
            return Err(domain!("zero list height must be nonnegative, got {height}"));
        }
        for w in gammas.windows(2) {
            if !(w[1] > w[0]) {
                return Err(domain!("ordinates not strictly ascending at {}", w[1]));
            }
        }
        if let Some(&g) = gammas.first() {
            if !(g > 0.0) {
                return Err(domain!("ordinates must be positive, got {g}"));
            }
        }
        gammas.retain(|&g| g <= height);
        Ok(Self { gammas, height })
    }

    pub fn empty(height: f64) -> Self {
        Self {
            gammas: Vec::new(),
            height: height.max(0.0),
        }
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// The first `n` ordinates, complete up to the last one kept.
    pub fn first_n(&self, n: usize) -> ZeroList {
        let gammas: Vec<f64> = self.gammas.iter().take(n).copied().collect();
        let height = if n >= self.gammas.len() {
            self.height
        } else {
            // Anything strictly below the next ordinate is complete.
            gammas.last().copied().unwrap_or(0.0).max(0.0)
        };
        ZeroList { gammas, height }
    }

    /// Ordinates with `γ ≤ t`.
    pub fn up_to(&self, t: f64) -> &[f64] {
        let end = self.gammas.partition_point(|&g| g <= t);
        &self.gammas[..end]
    }
}

/// `N(T) ≈ (T/2π) log(T/2πe) + 7/8`.
pub fn riemann_von_mangoldt(t: f64) -> f64 {
    if t <= 2.0 * PI {
        return 0.0;
    }
    let a = t / (2.0 * PI);
    a * (a.ln() - 1.0) + 0.875
}

/// Parse one-ordinate-per-line text. `source` labels parse errors.
pub fn parse_zeros(text: &str, height: f64, source: &Path) -> Result<ZeroList> {
    if !(height >= 0.0) || !height.is_finite() {
        return Err(domain!("zero list height must be finite and nonnegative, got {height}"));
    }
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        msg,
    };
    let mut gammas = Vec::new();
    let mut prev = 0.0f64;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        let g: f64 = s
            .parse()
            .map_err(|_| parse_err(line, format!("not a decimal number: {s:?}")))?;
        if !g.is_finite() || g <= 0.0 {
            return Err(parse_err(line, format!("ordinate must be positive and finite, got {s}")));
        }
        if g <= prev {
            return Err(parse_err(line, format!("ordinates not ascending: {g} after {prev}")));
        }
        if gammas.is_empty() && (g - FIRST_ORDINATE).abs() > 1e-3 {
            return Err(parse_err(line, format!("first ordinate {g} is not the first zeta zero")));
        }
        prev = g;
        if g <= height {
            gammas.push(g);
        }
    }
    let expected = riemann_von_mangoldt(height);
    let n = gammas.len() as f64;
    if n > 1.1 * expected + 10.0 {
        return Err(parse_err(
            0,
            format!("{n} ordinates up to {height} but only about {expected:.0} zeros exist there"),
        ));
    }
    if n < 0.9 * expected - 10.0 {
        log::warn!(
            "{}: {n} ordinates up to height {height}, expected about {expected:.0}; \
             sums treat the list as complete",
            source.display()
        );
    }
    Ok(ZeroList { gammas, height })
}

pub fn load_zeros(path: impl AsRef<Path>, height: f64) -> Result<ZeroList> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_zeros(&text, height, path)
}

/// `Σ_{0<γ≤T} [y^ρ/(ρ−s0) + y^ρ̄/(ρ̄−s0)]` with `ρ = 1/2 + iγ`, conjugate
/// pairs added together. For real `s0` each pair is `2 Re(y^ρ/(ρ−s0))`, so
/// the result is exactly real.
pub fn zero_sum(zeros: &ZeroList, y: f64, s0: Complex64, t: f64) -> Result<Complex64> {
    if t > zeros.height() {
        return Err(range!("zero sum height {t} exceeds list height {}", zeros.height()));
    }
    if !(y >= 2.0) {
        return Err(domain!("zero sum needs y >= 2, got {y}"));
    }
    let ln_y = y.ln();
    let sqrt_y = y.sqrt();
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    let real_s0 = s0.im == 0.0;
    for &g in zeros.up_to(t) {
        let rho = Complex64::new(0.5, g);
        let d = rho - s0;
        let dc = rho.conj() - s0;
        if d.norm() < 1e-12 || dc.norm() < 1e-12 {
            return Err(domain!("s0 = {s0} coincides with a zero at height {g}"));
        }
        let phase = Complex64::from_polar(sqrt_y, g * ln_y);
        if real_s0 {
            re.add(2.0 * (phase / d).re);
        } else {
            let pair = phase / d + phase.conj() / dc;
            re.add(pair.re);
            im.add(pair.im);
        }
    }
    Ok(Complex64::new(re.sum(), im.sum()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test")
    }

    #[test]
    fn truncates_at_height() {
        let z = parse_zeros("14.134725\n21.022040\n", 20.0, p()).unwrap();
        assert_eq!(z.gammas(), &[14.134725]);
        assert_eq!(z.height(), 20.0);
    }

    #[test]
    fn empty_file_keeps_height() {
        let z = parse_zeros("", 50.0, p()).unwrap();
        assert!(z.is_empty());
        assert_eq!(z.height(), 50.0);
    }

    #[test]
    fn garbled_and_unsorted_report_line() {
        match parse_zeros("14.134725\nabc\n", 100.0, p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_zeros("14.134725\n25.0\n21.0\n", 100.0, p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_zeros("15.0\n", 100.0, p()).is_err());
    }

    #[test]
    fn sum_below_first_zero_is_empty() {
        let z = parse_zeros("14.134725\n21.022040\n", 30.0, p()).unwrap();
        let s = zero_sum(&z, 100.0, Complex64::new(0.7, 0.0), 10.0).unwrap();
        assert_eq!(s, Complex64::new(0.0, 0.0));
        assert!(zero_sum(&z, 100.0, Complex64::new(0.7, 0.0), 31.0).is_err());
    }

    #[test]
    fn real_inputs_give_real_sum() {
        let z = parse_zeros("14.134725\n21.022040\n25.010858\n", 30.0, p()).unwrap();
        let s = zero_sum(&z, 1234.5, Complex64::new(0.8, 0.0), 30.0).unwrap();
        assert_eq!(s.im, 0.0);
        // complex path agrees
        let c = zero_sum(&z, 1234.5, Complex64::new(0.8, 1e-300), 30.0).unwrap();
        assert!((c.re - s.re).abs() < 1e-12 * s.re.abs().max(1.0));
    }

    #[test]
    fn rvm_count() {
        // 10142 zeros up to height 10^4.
        assert!((riemann_von_mangoldt(1e4) - 10142.0).abs() < 2.0);
    }
}

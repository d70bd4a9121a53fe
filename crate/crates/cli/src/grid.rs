//! Grid syntax: a comma list, or `logspace:a:b:n`.

use crate::fail::{CliError, CliResult};

pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(rest) = text.strip_prefix("logspace:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!("logspace needs a:b:n, got {text:?}")));
        }
        let a = number(parts[0])?;
        let b = number(parts[1])?;
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad point count {:?}", parts[2])))?;
        if !(a > 0.0 && b > 0.0) {
            return Err(CliError::Domain(format!("logspace ends must be positive, got {a}, {b}")));
        }
        return Ok(logspace(a, b, n));
    }
    text.split(',').map(number).collect()
}

fn number(s: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("not a number: {:?}", s.trim())))
}

/// `n` points from `a` to `b`, equally spaced in `log`; ends are exact.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n)
                .map(|i| match i {
                    0 => a,
                    i if i == n - 1 => b,
                    _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

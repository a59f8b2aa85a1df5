use std::fmt;
use std::str::FromStr;

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    /// `x_i = cos(π (i + 1/2) / N)`.
    Chebyshev,
    /// `N` equally spaced points on `[-1, 1]`.
    Uniform,
    /// `x_i = q^i`.
    QLattice,
}

/// A set of evaluation points, written `chebyshev:21`, `uniform:11` or `q-lattice:10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub spacing: Spacing,
    pub count: usize,
}

impl Grid {
    pub const fn new(spacing: Spacing, count: usize) -> Self {
        Grid { spacing, count }
    }

    pub fn points(&self, q: f64) -> Vec<f64> {
        let n = self.count;
        match self.spacing {
            Spacing::Chebyshev => (0..n).map(|i| (PI * (i as f64 + 0.5) / n as f64).cos()).collect(),
            Spacing::Uniform if n == 1 => vec![0.0],
            Spacing::Uniform => (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect(),
            Spacing::QLattice => (0..n).map(|i| q.powi(i as i32)).collect(),
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, count) = s
            .split_once(':')
            .ok_or_else(|| format!("grid '{s}' should look like chebyshev:21"))?;
        let spacing = match kind {
            "chebyshev" => Spacing::Chebyshev,
            "uniform" => Spacing::Uniform,
            "q-lattice" => Spacing::QLattice,
            _ => return Err(format!("unknown grid spacing '{kind}' (chebyshev|uniform|q-lattice)")),
        };
        let count: usize = count
            .parse()
            .map_err(|_| format!("grid count '{count}' is not a non-negative integer"))?;
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        Ok(Grid { spacing, count })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.spacing {
            Spacing::Chebyshev => "chebyshev",
            Spacing::Uniform => "uniform",
            Spacing::QLattice => "q-lattice",
        };
        write!(f, "{kind}:{}", self.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["chebyshev:21", "uniform:1", "q-lattice:10"] {
            assert_eq!(s.parse::<Grid>().unwrap().to_string(), s);
        }
        for bad in ["chebyshev", "chebyshev:0", "gauss:3", "uniform:-2"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn points() {
        assert_eq!(Grid::new(Spacing::Uniform, 3).points(0.5), vec![-1.0, 0.0, 1.0]);
        assert_eq!(Grid::new(Spacing::QLattice, 3).points(0.5), vec![1.0, 0.5, 0.25]);
        let c = Grid::new(Spacing::Chebyshev, 21).points(0.5);
        assert_eq!(c.len(), 21);
        assert!(c.iter().all(|x| x.abs() < 1.0));
        assert!(c[10].abs() < 1e-15);
    }
}

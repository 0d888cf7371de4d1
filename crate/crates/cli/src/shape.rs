//! Textual shape and family specifications.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use gptcompat::io::{parse, PolytopeJson};
use gptcompat::{shapes, Polytope};

/// A state space: `simplex:d`, `hypercube:d`, `crosspolytope:d`, `ngon:n`,
/// `random:d:n[:seed]` or `file:path`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    Simplex(usize),
    Hypercube(usize),
    Crosspolytope(usize),
    Ngon(usize),
    Random {
        dim: usize,
        vertices: usize,
        seed: Option<u64>,
    },
    File(PathBuf),
}

fn number<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| anyhow::anyhow!("invalid {what} `{s}`"))
}

impl FromStr for ShapeSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .with_context(|| format!("shape `{s}` is missing `:`"))?;
        let spec = match kind {
            "file" => ShapeSpec::File(PathBuf::from(rest)),
            "simplex" => ShapeSpec::Simplex(number(rest, "dimension")?),
            "hypercube" => ShapeSpec::Hypercube(number(rest, "dimension")?),
            "crosspolytope" => ShapeSpec::Crosspolytope(number(rest, "dimension")?),
            "ngon" => ShapeSpec::Ngon(number(rest, "vertex count")?),
            "random" => {
                let parts: Vec<&str> = rest.split(':').collect();
                match parts.as_slice() {
                    [d, n] => ShapeSpec::Random {
                        dim: number(d, "dimension")?,
                        vertices: number(n, "vertex count")?,
                        seed: None,
                    },
                    [d, n, seed] => ShapeSpec::Random {
                        dim: number(d, "dimension")?,
                        vertices: number(n, "vertex count")?,
                        seed: Some(number(seed, "seed")?),
                    },
                    _ => bail!("expected random:d:n[:seed], got `{s}`"),
                }
            }
            _ => bail!("unknown shape kind `{kind}`"),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeSpec::Simplex(d) => write!(f, "simplex:{d}"),
            ShapeSpec::Hypercube(d) => write!(f, "hypercube:{d}"),
            ShapeSpec::Crosspolytope(d) => write!(f, "crosspolytope:{d}"),
            ShapeSpec::Ngon(n) => write!(f, "ngon:{n}"),
            ShapeSpec::Random {
                dim,
                vertices,
                seed: Some(s),
            } => write!(f, "random:{dim}:{vertices}:{s}"),
            ShapeSpec::Random {
                dim,
                vertices,
                seed: None,
            } => write!(f, "random:{dim}:{vertices}"),
            ShapeSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl ShapeSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            ShapeSpec::Simplex(d) | ShapeSpec::Hypercube(d) | ShapeSpec::Crosspolytope(d)
                if d == 0 =>
            {
                bail!("dimension must be at least 1")
            }
            ShapeSpec::Ngon(n) if n < 3 => bail!("ngon needs at least 3 vertices"),
            ShapeSpec::Random { dim, vertices, .. } if dim == 0 || vertices == 0 => {
                bail!("random shapes need a positive dimension and vertex count")
            }
            _ => Ok(()),
        }
    }

    /// Builds the polytope; `default_seed` applies to `random` without a seed.
    pub fn build(&self, tol: f64, default_seed: u64) -> Result<Polytope> {
        let k = match self {
            ShapeSpec::Simplex(d) => shapes::simplex(*d, tol)?,
            ShapeSpec::Hypercube(d) => shapes::hypercube(*d, tol)?,
            ShapeSpec::Crosspolytope(d) => shapes::crosspolytope(*d, tol)?,
            ShapeSpec::Ngon(n) => shapes::ngon(*n, tol)?,
            ShapeSpec::Random {
                dim,
                vertices,
                seed,
            } => shapes::random(*dim, *vertices, seed.unwrap_or(default_seed), tol)?,
            ShapeSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read polytope file {}", path.display()))?;
                let json: PolytopeJson = parse(&text)
                    .with_context(|| format!("cannot parse polytope file {}", path.display()))?;
                json.build(tol)?
            }
        };
        Ok(k)
    }
}

/// A one-parameter family for sweeps: `ngon:a..b[:step]` or
/// `random:d:n:a..b` (seeds `a` to `b`). Ranges are inclusive.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Ngon {
        from: usize,
        to: usize,
        step: usize,
    },
    Random {
        dim: usize,
        vertices: usize,
        seeds: (u64, u64),
    },
}

fn range<T: FromStr>(s: &str) -> Result<(T, T)> {
    let (a, b) = s
        .split_once("..")
        .with_context(|| format!("expected a range a..b, got `{s}`"))?;
    Ok((number(a, "range bound")?, number(b, "range bound")?))
}

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["ngon", r] | ["ngon", r, _] => {
                let (from, to) = range(r)?;
                let step = match parts.get(2) {
                    Some(st) => number(st, "step")?,
                    None => 1,
                };
                if step == 0 {
                    bail!("step must be positive");
                }
                if from < 3 && from <= to {
                    bail!("ngon needs at least 3 vertices");
                }
                Ok(Family::Ngon { from, to, step })
            }
            ["random", d, n, r] => {
                let spec = Family::Random {
                    dim: number(d, "dimension")?,
                    vertices: number(n, "vertex count")?,
                    seeds: range(r)?,
                };
                if let Family::Random { dim: 0, .. } | Family::Random { vertices: 0, .. } = spec {
                    bail!("random shapes need a positive dimension and vertex count");
                }
                Ok(spec)
            }
            _ => bail!("unknown family `{s}`; expected ngon:a..b[:step] or random:d:n:a..b"),
        }
    }
}

impl Family {
    /// Members in sweep order, with the swept parameter.
    pub fn members(&self) -> Vec<(u64, ShapeSpec)> {
        match *self {
            Family::Ngon { from, to, step } => (from..=to)
                .step_by(step)
                .map(|n| (n as u64, ShapeSpec::Ngon(n)))
                .collect(),
            Family::Random {
                dim,
                vertices,
                seeds: (a, b),
            } => (a..=b)
                .map(|s| {
                    (
                        s,
                        ShapeSpec::Random {
                            dim,
                            vertices,
                            seed: Some(s),
                        },
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_shapes() {
        assert_eq!(
            "simplex:3".parse::<ShapeSpec>().unwrap(),
            ShapeSpec::Simplex(3)
        );
        assert_eq!("ngon:7".parse::<ShapeSpec>().unwrap(), ShapeSpec::Ngon(7));
        assert_eq!(
            "random:3:10:42".parse::<ShapeSpec>().unwrap(),
            ShapeSpec::Random {
                dim: 3,
                vertices: 10,
                seed: Some(42)
            }
        );
        assert!("ngon:2".parse::<ShapeSpec>().is_err());
        assert!("hypercube:0".parse::<ShapeSpec>().is_err());
        assert!("sphere:2".parse::<ShapeSpec>().is_err());
        assert!("simplex".parse::<ShapeSpec>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "simplex:2",
            "hypercube:3",
            "crosspolytope:3",
            "ngon:9",
            "random:2:5",
            "random:2:5:7",
            "file:a.json",
        ] {
            assert_eq!(s.parse::<ShapeSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn family_members() {
        let f: Family = "ngon:4..16:4".parse().unwrap();
        let ns: Vec<u64> = f.members().iter().map(|(p, _)| *p).collect();
        assert_eq!(ns, vec![4, 8, 12, 16]);
        let empty: Family = "ngon:10..4".parse().unwrap();
        assert!(empty.members().is_empty());
        let r: Family = "random:2:6:1..3".parse().unwrap();
        assert_eq!(r.members().len(), 3);
        assert!("ngon:4..8:0".parse::<Family>().is_err());
        assert!("cube:1..2".parse::<Family>().is_err());
    }
}

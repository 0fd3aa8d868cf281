use crate::error::{Error, Result};

/// Work limits for operations whose cost can blow up on implicit families.
///
/// * `enumeration` bounds how many candidate sets an enumeration may examine.
/// * `cover_constraints` bounds the deduplicated constraint count accepted by
///   the minimum-bound solvers (their cover enumeration is exponential in it
///   in the worst case).
/// * `bisection_depth` bounds the number of halvings a threshold-payment
///   bisection may take before giving up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub enumeration: usize,
    pub cover_constraints: usize,
    pub bisection_depth: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 1_000_000,
            cover_constraints: 20,
            bisection_depth: 128,
        }
    }
}

impl Caps {
    /// Parses an override spec of the form `enum=1000000,cover=20,bisect=128`.
    /// Unmentioned caps keep their defaults. This is the format accepted by
    /// the `FRUGALITY_CAPS` environment variable and the CLI `--caps` flag.
    pub fn from_spec(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInstance(format!("bad caps entry `{part}`")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInstance(format!("bad caps value `{v}`")))
            };
            match key.trim() {
                "enum" | "enumeration" => caps.enumeration = parse(value)?,
                "cover" => caps.cover_constraints = parse(value)?,
                "bisect" | "bisection" => caps.bisection_depth = parse(value)? as u32,
                other => {
                    return Err(Error::InvalidInstance(format!("unknown cap `{other}`")));
                }
            }
        }
        Ok(caps)
    }
}

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgebraError, Parity, SuperAlgebra};

/// Largest number of Grassmann generators offered as a builtin.
pub const MAX_GRASSMANN_GENERATORS: u32 = 3;

/// The shipped test algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// The coefficient field itself, concentrated in even degree.
    Ground,
    /// Exterior algebra on `n` odd generators.
    Grassmann(u32),
    /// `k[x]/(x^2)` with `x` even.
    DualNumbers,
    /// `k[x]/(x^2 - 1)` with `x` odd.
    Clifford1,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Ground => f.write_str("ground"),
            Builtin::Grassmann(n) => write!(f, "grassmann:{n}"),
            Builtin::DualNumbers => f.write_str("dual-numbers"),
            Builtin::Clifford1 => f.write_str("clifford1"),
        }
    }
}

impl FromStr for Builtin {
    type Err = AlgebraError;

    /// Accepts `ground`, `grassmann:N` (or `grassmann(N)`), `dual-numbers`
    /// and `clifford1`; underscores may replace hyphens.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let unknown = || AlgebraError::UnknownBuiltin(s.to_string());
        match key.as_str() {
            "ground" => return Ok(Builtin::Ground),
            "dual-numbers" => return Ok(Builtin::DualNumbers),
            "clifford1" => return Ok(Builtin::Clifford1),
            _ => {}
        }
        let arg = key
            .strip_prefix("grassmann:")
            .or_else(|| {
                key.strip_prefix("grassmann(")
                    .and_then(|r| r.strip_suffix(')'))
            })
            .ok_or_else(unknown)?;
        let n = arg.trim().parse().map_err(|_| unknown())?;
        Ok(Builtin::Grassmann(n))
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn unit_vector(d: usize) -> Vec<BigRational> {
    let mut u = vec![BigRational::zero(); d];
    u[0] = BigRational::one();
    u
}

/// Builds a shipped algebra. Basis element 1 is always the unit.
pub fn builtin(kind: Builtin) -> Result<SuperAlgebra, AlgebraError> {
    let name = kind.to_string();
    match kind {
        Builtin::Ground => SuperAlgebra::new(
            name,
            vec!["1".into()],
            vec![Parity::Even],
            unit_vector(1),
            [(0, 0, 0, q(1))],
        ),
        Builtin::Grassmann(n) => grassmann(name, n),
        Builtin::DualNumbers | Builtin::Clifford1 => {
            let (parity, square) = match kind {
                Builtin::DualNumbers => (Parity::Even, None),
                _ => (Parity::Odd, Some((1, 1, 0, q(1)))),
            };
            let mut constants = vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))];
            constants.extend(square);
            SuperAlgebra::new(
                name,
                vec!["1".into(), "x".into()],
                vec![Parity::Even, parity],
                unit_vector(2),
                constants,
            )
        }
    }
}

/// Basis is indexed by subsets of generators as bitmasks, so `t1t2` is
/// index 3; `e_S e_T` is the sign of the shuffle times `e_{S∪T}`.
fn grassmann(name: String, n: u32) -> Result<SuperAlgebra, AlgebraError> {
    if n > MAX_GRASSMANN_GENERATORS {
        return Err(AlgebraError::TooLarge {
            dim: 1usize << n.min(63),
            cap: 1 << MAX_GRASSMANN_GENERATORS,
        });
    }
    let d = 1usize << n;
    let labels = (0..d)
        .map(|m| {
            if m == 0 {
                "1".to_string()
            } else {
                (0..n)
                    .filter(|g| m >> g & 1 == 1)
                    .map(|g| format!("t{}", g + 1))
                    .collect()
            }
        })
        .collect();
    let parity = (0..d)
        .map(|m| {
            if m.count_ones() % 2 == 1 {
                Parity::Odd
            } else {
                Parity::Even
            }
        })
        .collect();
    let mut constants = Vec::new();
    for s in 0..d {
        for t in 0..d {
            if s & t != 0 {
                continue;
            }
            // inversions: generators of s that sit after a generator of t
            let inversions: u32 = (0..n)
                .filter(|g| t >> g & 1 == 1)
                .map(|g| (s >> (g + 1)).count_ones())
                .sum();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            constants.push((s, t, s | t, q(sign)));
        }
    }
    SuperAlgebra::new(name, labels, parity, unit_vector(d), constants)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for kind in [
            Builtin::Ground,
            Builtin::Grassmann(2),
            Builtin::DualNumbers,
            Builtin::Clifford1,
        ] {
            assert_eq!(kind.to_string().parse::<Builtin>().unwrap(), kind);
        }
        assert_eq!(
            "grassmann(1)".parse::<Builtin>().unwrap(),
            Builtin::Grassmann(1)
        );
        assert_eq!(
            "dual_numbers".parse::<Builtin>().unwrap(),
            Builtin::DualNumbers
        );
        assert!("octonions".parse::<Builtin>().is_err());
    }

    #[test]
    fn shapes_of_builtins() {
        let g = builtin(Builtin::Ground).unwrap();
        assert_eq!((g.dim(), g.parities()), (1, &[Parity::Even][..]));
        let l = builtin(Builtin::Grassmann(1)).unwrap();
        assert_eq!(l.parities(), &[Parity::Even, Parity::Odd]);
        assert!(l.product(1, 1).is_empty());
        let c = builtin(Builtin::Clifford1).unwrap();
        assert_eq!(c.product(1, 1), &[(0, q(1))]);
        let dn = builtin(Builtin::DualNumbers).unwrap();
        assert_eq!(dn.parities(), &[Parity::Even, Parity::Even]);
        assert!(builtin(Builtin::Grassmann(4)).is_err());
    }

    #[test]
    fn grassmann_signs() {
        let a = builtin(Builtin::Grassmann(2)).unwrap();
        assert_eq!(a.basis_labels(), &["1", "t1", "t2", "t1t2"]);
        assert_eq!(a.product(1, 2), &[(3, q(1))]);
        assert_eq!(a.product(2, 1), &[(3, q(-1))]);
        let b = builtin(Builtin::Grassmann(3)).unwrap();
        // t2 · t1t3 = -t1t2t3
        assert_eq!(b.product(2, 5), &[(7, q(-1))]);
        assert_eq!(b.dim(), 8);
    }
}

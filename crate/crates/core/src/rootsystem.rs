//! The root system of type Ã₁: `Z x {1, -1}` with the two reflections.

use std::fmt;

use serde::{Deserialize, Serialize};

/// The sign component of a root. Serializes as `1` / `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("eps must be 1 or -1, got {other}")),
        }
    }
}

/// `eps_z`: `+1` for `z <= 0`, `-1` for `z > 0`.
pub fn positive_sign(z: i64) -> Sign {
    if z <= 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A root `(z, eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub z: i64,
    pub eps: Sign,
}

/// One of the two simple reflections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reflection {
    R0,
    R1,
}

impl Reflection {
    pub fn index(self) -> i64 {
        match self {
            Reflection::R0 => 0,
            Reflection::R1 => 1,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(Reflection::R0),
            1 => Some(Reflection::R1),
            _ => None,
        }
    }
}

impl Root {
    pub const fn new(z: i64, eps: Sign) -> Self {
        Self { z, eps }
    }

    /// `r_i(z, eps) = (2i - z, -eps)`.
    pub fn reflect(self, i: Reflection) -> Self {
        Self::new(2 * i.index() - self.z, self.eps.flip())
    }

    /// `-(z, eps) = (z, -eps)`.
    pub fn negate(self) -> Self {
        Self::new(self.z, self.eps.flip())
    }

    pub fn is_positive(self) -> bool {
        self.eps == positive_sign(self.z)
    }

    /// The simple root `alpha_i = (i, eps_i)`.
    pub fn alpha(i: Reflection) -> Self {
        Self::new(i.index(), positive_sign(i.index()))
    }

    /// All roots with `|z| <= k`, ordered by `(z, eps)`.
    pub fn range(k: i64) -> impl Iterator<Item = Root> {
        (-k..=k).flat_map(|z| [Root::new(z, Sign::Plus), Root::new(z, Sign::Minus)])
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z, self.eps.as_i8())
    }
}

/// Renders roots `[-k, k]` as two rows: `●` for positive, `○` for negative.
pub fn render_roots(k: i64) -> String {
    let mut out = String::new();
    for eps in [Sign::Plus, Sign::Minus] {
        out.push_str(if eps == Sign::Plus { "+1 " } else { "-1 " });
        for z in -k..=k {
            out.push(if Root::new(z, eps).is_positive() {
                '●'
            } else {
                '○'
            });
            out.push(' ');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reflection_examples() {
        let r = Root::new(0, Sign::Plus);
        assert_eq!(r.reflect(Reflection::R1), Root::new(2, Sign::Minus));
        assert!(Root::new(1, Sign::Minus).is_positive());
        assert!(!Root::new(1, Sign::Plus).is_positive());
        assert!(Root::new(0, Sign::Plus).is_positive());
        assert_eq!(Root::alpha(Reflection::R0), Root::new(0, Sign::Plus));
        assert_eq!(Root::alpha(Reflection::R1), Root::new(1, Sign::Minus));
        assert_eq!(r.negate(), Root::new(0, Sign::Minus));
    }

    #[test]
    fn json_form() {
        let r = Root::new(-3, Sign::Minus);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"z":-3,"eps":-1}"#);
        let back: Root = serde_json::from_str(r#"{"z":-3,"eps":-1}"#).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<Root>(r#"{"z":0,"eps":0}"#).is_err());
    }

    #[test]
    fn render_matches_positivity() {
        let s = render_roots(1);
        assert_eq!(s, "+1 ● ● ○ \n-1 ○ ○ ● \n");
    }

    fn root() -> impl Strategy<Value = Root> {
        (-1000i64..1000, any::<bool>())
            .prop_map(|(z, b)| Root::new(z, if b { Sign::Plus } else { Sign::Minus }))
    }

    proptest! {
        #[test]
        fn reflections_are_involutions(r in root()) {
            for i in [Reflection::R0, Reflection::R1] {
                prop_assert_eq!(r.reflect(i).reflect(i), r);
                prop_assert_eq!(r.reflect(i).eps, r.eps.flip());
            }
        }

        #[test]
        fn composite_is_shift_by_two(r in root()) {
            let s = r.reflect(Reflection::R1).reflect(Reflection::R0);
            prop_assert_eq!(s, Root::new(r.z - 2, r.eps));
        }

        #[test]
        fn exactly_one_of_pair_positive(r in root()) {
            prop_assert_ne!(r.is_positive(), r.negate().is_positive());
        }
    }
}

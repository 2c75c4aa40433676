use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A stack-space value. `AtLeast` is a lower bound left by a cut-off search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureValue {
    Finite(usize),
    Infinite,
    AtLeast(usize),
}

impl MeasureValue {
    pub fn is_certified(self) -> bool {
        !matches!(self, MeasureValue::AtLeast(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            MeasureValue::Finite(k) => Some(k),
            _ => None,
        }
    }

    /// Maximum of two values. A lower bound stays a lower bound unless the
    /// other side is infinite.
    pub fn join(self, other: MeasureValue) -> MeasureValue {
        use MeasureValue::*;
        match (self, other) {
            (Infinite, _) | (_, Infinite) => Infinite,
            (Finite(a), Finite(b)) => Finite(a.max(b)),
            (AtLeast(a), Finite(b)) | (Finite(b), AtLeast(a)) | (AtLeast(a), AtLeast(b)) => AtLeast(a.max(b)),
        }
    }

    /// Order on certified values: `Finite(a) < Finite(b)` for `a < b`, every
    /// finite value below `Infinite`. `None` when a lower bound is involved.
    pub fn certified_cmp(self, other: MeasureValue) -> Option<Ordering> {
        use MeasureValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(a.cmp(&b)),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Infinite, Infinite) => Some(Ordering::Equal),
            _ => None,
        }
    }

    /// Long form used by the `measure` command: `finite 3`, `infinite`,
    /// `at-least 12`.
    pub fn describe(self) -> String {
        match self {
            MeasureValue::Finite(k) => format!("finite {k}"),
            MeasureValue::Infinite => "infinite".into(),
            MeasureValue::AtLeast(k) => format!("at-least {k}"),
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Finite(k) => write!(f, "{k}"),
            MeasureValue::Infinite => f.write_str("inf"),
            MeasureValue::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

impl FromStr for MeasureValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(MeasureValue::Infinite);
        }
        if let Some(k) = s.strip_prefix(">=") {
            return k.parse().map(MeasureValue::AtLeast).map_err(|e| format!("`{s}`: {e}"));
        }
        s.parse().map(MeasureValue::Finite).map_err(|e| format!("`{s}`: {e}"))
    }
}

impl Serialize for MeasureValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MeasureValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse() {
        for v in [
            MeasureValue::Finite(3),
            MeasureValue::Infinite,
            MeasureValue::AtLeast(12),
        ] {
            assert_eq!(v.to_string().parse::<MeasureValue>().unwrap(), v);
        }
        assert_eq!(MeasureValue::Infinite.to_string(), "inf");
        assert_eq!(MeasureValue::AtLeast(4).to_string(), ">=4");
        assert_eq!(MeasureValue::Finite(3).describe(), "finite 3");
    }

    #[test]
    fn join_is_max() {
        use MeasureValue::*;
        assert_eq!(Finite(2).join(Finite(5)), Finite(5));
        assert_eq!(Finite(9).join(AtLeast(5)), AtLeast(9));
        assert_eq!(AtLeast(1).join(Infinite), Infinite);
    }
}

//! Weight algebra.
//!
//! The k-shortest-path problem is only well defined over semirings whose
//! `plus` always returns one of its arguments (the *path property*). Under
//! that property the natural order `a <= b  <=>  a + b == a` is total, which
//! is what every priority queue in this crate orders by.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A semiring with the path property.
pub trait Semiring:
    Copy + PartialEq + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
    /// Whether `times` commutes. The outside-weight heuristic needs this.
    const COMMUTATIVE: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn plus(self, rhs: Self) -> Self;
    fn times(self, rhs: Self) -> Self;

    /// True when multiplying any weight by `self` never yields a weight that
    /// precedes the original in the natural order.
    fn is_nondecreasing_factor(self) -> bool;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }

    /// Natural order: `a <= b` iff `a + b == a`.
    fn nat_leq(self, rhs: Self) -> bool {
        self.plus(rhs) == self
    }

    /// Total order derived from [`Semiring::nat_leq`].
    fn nat_cmp(self, rhs: Self) -> Ordering {
        if self == rhs {
            Ordering::Equal
        } else if self.nat_leq(rhs) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// Tropical weight `<R ∪ {+inf}, min, +, +inf, 0>`.
///
/// NaN and -inf are not weights; constructors reject them.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct Tropical(f64);

impl Tropical {
    pub const INFINITY: Tropical = Tropical(f64::INFINITY);

    pub fn new(value: f64) -> Self {
        assert!(
            !value.is_nan() && value != f64::NEG_INFINITY,
            "tropical weight must be a real number or +inf"
        );
        Tropical(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for Tropical {
    fn from(value: f64) -> Self {
        Tropical::new(value)
    }
}

impl From<i32> for Tropical {
    fn from(value: i32) -> Self {
        Tropical(f64::from(value))
    }
}

impl Semiring for Tropical {
    const COMMUTATIVE: bool = true;

    fn zero() -> Self {
        Tropical::INFINITY
    }

    fn one() -> Self {
        Tropical(0.0)
    }

    fn plus(self, rhs: Self) -> Self {
        if rhs.0 < self.0 {
            rhs
        } else {
            self
        }
    }

    fn times(self, rhs: Self) -> Self {
        if self.0 == f64::INFINITY || rhs.0 == f64::INFINITY {
            Tropical::INFINITY
        } else {
            Tropical(self.0 + rhs.0)
        }
    }

    fn is_nondecreasing_factor(self) -> bool {
        self.0 >= 0.0
    }

    fn nat_cmp(self, rhs: Self) -> Ordering {
        self.0
            .partial_cmp(&rhs.0)
            .expect("NaN is never constructed")
    }
}

impl fmt::Debug for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shortest round-trip decimal; `+inf` renders as `inf`.
impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == 0.0 {
            // Normalise -0.
            f.write_str("0")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Tropical {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "+inf" {
            return Ok(Tropical::INFINITY);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Tropical(v)),
            _ => Err(Error::BadWeight(s.to_string())),
        }
    }
}

/// Boolean semiring `<{0,1}, or, and, 0, 1>`. Used for reachability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Boolean(pub bool);

impl Boolean {
    pub const TRUE: Boolean = Boolean(true);
    pub const FALSE: Boolean = Boolean(false);
}

impl Semiring for Boolean {
    const COMMUTATIVE: bool = true;

    fn zero() -> Self {
        Boolean::FALSE
    }

    fn one() -> Self {
        Boolean::TRUE
    }

    fn plus(self, rhs: Self) -> Self {
        Boolean(self.0 || rhs.0)
    }

    fn times(self, rhs: Self) -> Self {
        Boolean(self.0 && rhs.0)
    }

    fn is_nondecreasing_factor(self) -> bool {
        true
    }
}

impl fmt::Display for Boolean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl FromStr for Boolean {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" | "true" => Ok(Boolean::TRUE),
            "0" | "false" => Ok(Boolean::FALSE),
            other => Err(Error::BadWeight(other.to_string())),
        }
    }
}

/// Min-first key for `BinaryHeap`: natural order of the priority, then
/// insertion sequence.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MinKey<W> {
    pub priority: W,
    pub seq: u64,
}

impl<W: Semiring> PartialEq for MinKey<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<W: Semiring> Eq for MinKey<W> {}

impl<W: Semiring> PartialOrd for MinKey<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Semiring> Ord for MinKey<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap.
        other
            .priority
            .nat_cmp(self.priority)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Heap entry ordered by its [`MinKey`] alone.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Keyed<W, T> {
    pub key: MinKey<W>,
    pub value: T,
}

impl<W: Semiring, T> PartialEq for Keyed<W, T> {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl<W: Semiring, T> Eq for Keyed<W, T> {}

impl<W: Semiring, T> PartialOrd for Keyed<W, T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Semiring, T> Ord for Keyed<W, T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: f64) -> Tropical {
        Tropical::new(v)
    }

    #[test]
    fn plus_examples() {
        assert_eq!(t(3.0).plus(t(5.0)), t(3.0));
        assert_eq!(Tropical::zero().plus(t(7.0)), t(7.0));
        assert_eq!(t(4.0).plus(t(4.0)), t(4.0));
    }

    #[test]
    fn times_examples() {
        assert_eq!(t(3.0).times(t(5.0)), t(8.0));
        assert_eq!(Tropical::one().times(t(9.0)), t(9.0));
        assert_eq!(Tropical::zero().times(t(2.0)), Tropical::zero());
        assert_eq!(t(-2.0).times(Tropical::zero()), Tropical::zero());
    }

    #[test]
    fn nat_leq_examples() {
        assert!(t(3.0).nat_leq(t(5.0)));
        assert!(!t(5.0).nat_leq(t(3.0)));
        assert!(t(7.0).nat_leq(Tropical::zero()));
    }

    #[test]
    fn text_form() {
        assert_eq!(Tropical::zero().to_string(), "inf");
        assert_eq!(t(3.0).to_string(), "3");
        assert_eq!(t(-0.0).to_string(), "0");
        assert_eq!(t(0.1).to_string(), "0.1");
        assert_eq!("inf".parse::<Tropical>().unwrap(), Tropical::zero());
        assert_eq!("2.5".parse::<Tropical>().unwrap(), t(2.5));
        assert!("nan".parse::<Tropical>().is_err());
        assert!("-inf".parse::<Tropical>().is_err());
        assert!("x".parse::<Tropical>().is_err());
    }

    #[test]
    fn min_key_orders_smallest_first() {
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(MinKey {
            priority: t(3.0),
            seq: 0,
        });
        heap.push(MinKey {
            priority: t(1.0),
            seq: 2,
        });
        heap.push(MinKey {
            priority: t(1.0),
            seq: 1,
        });
        heap.push(MinKey {
            priority: Tropical::zero(),
            seq: 3,
        });
        let order: Vec<_> = std::iter::from_fn(|| heap.pop()).map(|k| k.seq).collect();
        assert_eq!(order, vec![1, 2, 0, 3]);
    }

    fn weight() -> impl Strategy<Value = Tropical> {
        prop_oneof![
            9 => (-50i32..50).prop_map(Tropical::from),
            1 => Just(Tropical::zero()),
        ]
    }

    proptest! {
        #[test]
        fn path_property(a in weight(), b in weight()) {
            let s = a.plus(b);
            prop_assert!(s == a || s == b);
        }

        #[test]
        fn natural_order_is_total_order(a in weight(), b in weight(), c in weight()) {
            prop_assert!(a.nat_leq(a));
            prop_assert!(a.nat_leq(b) || b.nat_leq(a));
            if a.nat_leq(b) && b.nat_leq(a) {
                prop_assert_eq!(a, b);
            }
            if a.nat_leq(b) && b.nat_leq(c) {
                prop_assert!(a.nat_leq(c));
            }
            let expected = if a.nat_leq(b) && a != b { Ordering::Less }
                else if a == b { Ordering::Equal } else { Ordering::Greater };
            prop_assert_eq!(a.nat_cmp(b), expected);
        }

        #[test]
        fn semiring_laws(a in weight(), b in weight(), c in weight()) {
            let zero = Tropical::zero();
            let one = Tropical::one();
            prop_assert_eq!(a.plus(b).plus(c), a.plus(b.plus(c)));
            prop_assert_eq!(a.times(b).times(c), a.times(b.times(c)));
            prop_assert_eq!(a.plus(b), b.plus(a));
            prop_assert_eq!(a.times(b), b.times(a));
            prop_assert_eq!(a.plus(zero), a);
            prop_assert_eq!(a.times(one), a);
            prop_assert_eq!(one.times(a), a);
            prop_assert_eq!(a.times(zero), zero);
            prop_assert_eq!(zero.times(a), zero);
            prop_assert_eq!(a.times(b.plus(c)), a.times(b).plus(a.times(c)));
            prop_assert_eq!(b.plus(c).times(a), b.times(a).plus(c.times(a)));
            prop_assert_eq!(a.plus(a), a);
        }

        #[test]
        fn boolean_laws(a: bool, b: bool, c: bool) {
            let (a, b, c) = (Boolean(a), Boolean(b), Boolean(c));
            let s = a.plus(b);
            prop_assert!(s == a || s == b);
            prop_assert_eq!(a.times(b.plus(c)), a.times(b).plus(a.times(c)));
            prop_assert_eq!(a.times(Boolean::one()), a);
            prop_assert_eq!(a.plus(Boolean::zero()), a);
            prop_assert_eq!(a.to_string().parse::<Boolean>().unwrap(), a);
        }

        #[test]
        fn display_round_trips(v in -1.0e6f64..1.0e6) {
            let w = Tropical::new(v);
            prop_assert_eq!(w.to_string().parse::<Tropical>().unwrap(), w);
        }
    }
}

//! Grid points, one-parameter bars and the entanglement relation between them.

use std::cmp::Ordering;
use std::fmt;

/// A point `(scale, height)` of the grid `{1..m} x {1..n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bigrade {
    pub scale: u32,
    pub height: u32,
}

impl Bigrade {
    pub const fn new(scale: u32, height: u32) -> Self {
        Self { scale, height }
    }

    /// Componentwise (product) order.
    pub fn le(&self, other: &Bigrade) -> bool {
        self.scale <= other.scale && self.height <= other.height
    }
}

impl fmt::Display for Bigrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.scale, self.height)
    }
}

/// A bar `[birth, death)` sitting at `height`. A death of `m + 1` means the bar
/// never dies inside a grid with `m` scales.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bar {
    pub birth: u32,
    pub death: u32,
    pub height: u32,
}

impl Bar {
    pub const fn new(birth: u32, death: u32, height: u32) -> Self {
        Self {
            birth,
            death,
            height,
        }
    }

    pub fn contains(&self, scale: u32) -> bool {
        self.birth <= scale && scale < self.death
    }

    /// Same interval, ignoring the height.
    pub fn same_interval(&self, other: &Bar) -> bool {
        self.birth == other.birth && self.death == other.death
    }

    pub fn intersects(&self, other: &Bar) -> bool {
        self.birth.max(other.birth) < self.death.min(other.death)
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})@{}", self.birth, self.death, self.height)
    }
}

/// `j ◁ i`: there is a nonzero morphism from the interval module of `i` to the
/// one of `j`, i.e. `b(j) <= b(i) < d(j) <= d(i)`. Heights are ignored.
pub fn entangled(j: &Bar, i: &Bar) -> bool {
    j.birth <= i.birth && i.birth < j.death && j.death <= i.death
}

/// Lexicographic `(birth, death)` order used to index bars at one height.
/// Entanglement between distinct bars only ever points forward in this order.
pub fn bar_order(a: &Bar, b: &Bar) -> Ordering {
    (a.birth, a.death).cmp(&(b.birth, b.death))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bar(b: u32, d: u32) -> Bar {
        Bar::new(b, d, 1)
    }

    #[test]
    fn entanglement_examples() {
        assert!(entangled(&bar(2, 4), &bar(3, 5)));
        assert!(!entangled(&bar(1, 2), &bar(3, 4)));
        assert!(entangled(&bar(1, 4), &bar(1, 4)));
        // [2,6) is not entangled with [3,5): 6 <= 5 fails.
        assert!(!entangled(&bar(2, 6), &bar(3, 5)));
    }

    #[test]
    fn heights_do_not_matter() {
        assert!(entangled(&Bar::new(2, 4, 7), &Bar::new(3, 5, 1)));
    }

    fn arb_bar() -> impl Strategy<Value = Bar> {
        (1u32..10, 1u32..10).prop_map(|(b, len)| bar(b, b + len))
    }

    proptest! {
        #[test]
        fn entangled_implies_intersecting(j in arb_bar(), i in arb_bar()) {
            if entangled(&j, &i) {
                prop_assert!(j.intersects(&i));
            }
            if j.intersects(&i) && j.birth <= i.birth && j.death <= i.death {
                prop_assert!(entangled(&j, &i));
            }
        }

        #[test]
        fn lex_order_puts_entangled_sources_first(mut bars in proptest::collection::vec(arb_bar(), 0..12)) {
            bars.sort_by(bar_order);
            bars.dedup();
            for k in 0..bars.len() {
                for l in 0..bars.len() {
                    if k != l && entangled(&bars[k], &bars[l]) {
                        prop_assert!(k < l);
                    }
                }
            }
        }
    }
}

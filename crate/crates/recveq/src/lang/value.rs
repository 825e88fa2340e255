//! Fixed-width two's-complement arithmetic shared by the interpreter, the
//! enumeration solver and the bit-blaster tests. Values are kept
//! sign-extended in an `i64`; every operation re-wraps to the active width.
//!
//! Division and remainder by zero are defined to yield 0 so that every
//! expression is total; partial equivalence then hinges only on termination.

use serde::{Deserialize, Serialize};

use super::ast::{BinOp, UnOp};

/// Bit width of the integer type, 2..=64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Width(u32);

impl Width {
    pub const W8: Width = Width(8);
    pub const W32: Width = Width(32);

    pub fn new(bits: u32) -> Result<Width, String> {
        if (2..=64).contains(&bits) {
            Ok(Width(bits))
        } else {
            Err(format!("width must be in 2..=64, got {bits}"))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn min_value(self) -> i64 {
        -(1i64 << (self.0 - 1))
    }

    pub fn max_value(self) -> i64 {
        (1i64 << (self.0 - 1)) - 1
    }

    /// Sign-extend the low `bits` of `x`.
    pub fn wrap(self, x: i64) -> i64 {
        let shift = 64 - self.0;
        (x << shift) >> shift
    }

    /// Unsigned view of a wrapped value, for lexicographic model order.
    pub fn to_unsigned(self, x: i64) -> u64 {
        (x as u64) & self.mask()
    }

    pub fn from_unsigned(self, x: u64) -> i64 {
        self.wrap(x as i64)
    }

    pub fn mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }
}

impl Default for Width {
    fn default() -> Self {
        Width::W8
    }
}

pub fn truthy(x: i64) -> bool {
    x != 0
}

pub fn from_bool(b: bool) -> i64 {
    if b {
        1
    } else {
        0
    }
}

pub fn eval_unop(w: Width, op: UnOp, a: i64) -> i64 {
    match op {
        UnOp::Neg => w.wrap(a.wrapping_neg()),
        UnOp::Not => from_bool(a == 0),
    }
}

/// Evaluate a non-short-circuit binary operation on wrapped values.
/// `And`/`Or` are evaluated strictly here; the language has no side
/// effects, so short-circuiting is an implementation detail of `nondet`
/// placement only.
pub fn eval_binop(w: Width, op: BinOp, a: i64, b: i64) -> i64 {
    match op {
        BinOp::Add => w.wrap(a.wrapping_add(b)),
        BinOp::Sub => w.wrap(a.wrapping_sub(b)),
        BinOp::Mul => w.wrap(a.wrapping_mul(b)),
        BinOp::Div => {
            if b == 0 {
                0
            } else {
                w.wrap(a.wrapping_div(b))
            }
        }
        BinOp::Rem => {
            if b == 0 {
                0
            } else {
                w.wrap(a.wrapping_rem(b))
            }
        }
        BinOp::Eq => from_bool(a == b),
        BinOp::Ne => from_bool(a != b),
        BinOp::Lt => from_bool(a < b),
        BinOp::Le => from_bool(a <= b),
        BinOp::Gt => from_bool(a > b),
        BinOp::Ge => from_bool(a >= b),
        BinOp::And => from_bool(truthy(a) && truthy(b)),
        BinOp::Or => from_bool(truthy(a) || truthy(b)),
        BinOp::BitAnd => w.wrap(a & b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_twos_complement() {
        let w = Width::W8;
        assert_eq!(w.wrap(127), 127);
        assert_eq!(w.wrap(128), -128);
        assert_eq!(w.wrap(255), -1);
        assert_eq!(w.wrap(256), 0);
        assert_eq!(w.wrap(-129), 127);
    }

    #[test]
    fn division_by_zero_is_zero() {
        let w = Width::W8;
        assert_eq!(eval_binop(w, BinOp::Div, 17, 0), 0);
        assert_eq!(eval_binop(w, BinOp::Rem, 17, 0), 0);
    }

    #[test]
    fn div_overflow_wraps() {
        let w = Width::W8;
        // -128 / -1 wraps back to -128 at width 8.
        assert_eq!(eval_binop(w, BinOp::Div, -128, -1), -128);
        assert_eq!(eval_binop(w, BinOp::Rem, -128, -1), 0);
    }

    #[test]
    fn width_bounds() {
        assert!(Width::new(1).is_err());
        assert!(Width::new(65).is_err());
        assert_eq!(Width::new(8).unwrap().min_value(), -128);
        assert_eq!(Width::new(8).unwrap().max_value(), 127);
    }

    #[test]
    fn unsigned_roundtrip() {
        let w = Width::W8;
        for v in -128..=127i64 {
            assert_eq!(w.from_unsigned(w.to_unsigned(v)), v);
        }
    }
}

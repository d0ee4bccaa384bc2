pub mod hypersphere;
pub mod kernel;
pub mod point;
pub mod predicates;
pub mod transforms;

pub use hypersphere::{hypersphere_through, Hypersphere};
pub use point::{Metadata, Point, PointSet};
pub use predicates::{coplanar, cospherical, general_position_check, span_check, GeneralPosition};
pub use transforms::{invert, invert_set, lift, lift_set, project, project_set};

use crate::numeric::ZeroTest;

/// Outcome of a predicate that interval arithmetic may fail to decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Indeterminate,
}

impl Tri {
    /// `Zero` maps to `True`: the tested quantity vanishes.
    pub fn from_zero_test(z: ZeroTest) -> Tri {
        match z {
            ZeroTest::Zero => Tri::True,
            ZeroTest::NonZero => Tri::False,
            ZeroTest::Unknown => Tri::Indeterminate,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Tri::True => Some(true),
            Tri::False => Some(false),
            Tri::Indeterminate => None,
        }
    }
}

//! Loss functions. All rules here are {0,1}-valued and evaluated exactly.

use crate::domain::LabeledExample;
use crate::num::{rat_int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossFunction {
    /// `1[prediction != label]`.
    ZeroOne,
    /// `1[prediction * label < 0]`: penalizes sign disagreement only, so a
    /// zero label can never be lost against. Used with real-valued
    /// prediction grids.
    SignAgreement,
}

impl LossFunction {
    pub fn eval(&self, prediction: Rat, example: &LabeledExample) -> Rat {
        let wrong = match self {
            LossFunction::ZeroOne => prediction != example.label,
            LossFunction::SignAgreement => (prediction * example.label) < Rat::zero(),
        };
        rat_int(wrong as i64)
    }

    /// Every rule in this crate takes values in {0,1}; bounded-loss theorems
    /// apply to all of them, zero-one-specific identities to all as well.
    pub fn is_zero_one_valued(&self) -> bool {
        true
    }

    pub fn name(&self) -> &'static str {
        match self {
            LossFunction::ZeroOne => "zero-one",
            LossFunction::SignAgreement => "sign-agreement",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::PointIdx;
    use crate::num::rat;

    #[test]
    fn zero_one() {
        let ex = LabeledExample::new(PointIdx(0), rat_int(1));
        assert_eq!(LossFunction::ZeroOne.eval(rat_int(1), &ex), rat_int(0));
        assert_eq!(LossFunction::ZeroOne.eval(rat_int(0), &ex), rat_int(1));
    }

    #[test]
    fn sign_agreement() {
        let pos = LabeledExample::new(PointIdx(0), rat_int(1));
        let zero = LabeledExample::new(PointIdx(0), rat_int(0));
        assert_eq!(
            LossFunction::SignAgreement.eval(rat(-1, 2), &pos),
            rat_int(1)
        );
        assert_eq!(
            LossFunction::SignAgreement.eval(rat(1, 2), &pos),
            rat_int(0)
        );
        // zero label: no prediction can disagree in sign
        assert_eq!(
            LossFunction::SignAgreement.eval(rat(-7, 8), &zero),
            rat_int(0)
        );
    }
}

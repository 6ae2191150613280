//! The tollbooth adaptation-manager model and its three service properties.

use std::fmt;
use std::str::FromStr;

use crate::logic::{ActionPattern, Formula};
use crate::syntax::{parse_model, Model};

pub const TOLLBOOTH_SOURCE: &str = include_str!("../../../corpus/tollbooth.cows");
pub const TOLLBOOTH_PROPS: &str = include_str!("../../../corpus/tollbooth.prop");

const REQUEST: &str = "serv.create!<0,4,10,60>";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TollboothParams {
    pub adapt_estimate: i64,
    pub adapt_deadline: i64,
    pub exec_estimate: i64,
    pub exec_bound: i64,
}

impl Default for TollboothParams {
    fn default() -> Self {
        TollboothParams {
            adapt_estimate: 0,
            adapt_deadline: 4,
            exec_estimate: 10,
            exec_bound: 60,
        }
    }
}

impl fmt::Display for TollboothParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.adapt_estimate, self.adapt_deadline, self.exec_estimate, self.exec_bound
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected four comma-separated integers, got `{0}`")]
pub struct ParamsError(pub String);

impl FromStr for TollboothParams {
    type Err = ParamsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let nums: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| ParamsError(s.to_string()))?;
        match nums[..] {
            [a, b, c, d] => Ok(TollboothParams {
                adapt_estimate: a,
                adapt_deadline: b,
                exec_estimate: c,
                exec_bound: d,
            }),
            _ => Err(ParamsError(s.to_string())),
        }
    }
}

/// Model source with the requestor's four values replaced.
pub fn tollbooth_source(p: &TollboothParams) -> String {
    TOLLBOOTH_SOURCE.replacen(REQUEST, &format!("serv.create!<{}>", p), 1)
}

pub fn build_tollbooth(p: &TollboothParams) -> Model {
    parse_model(&tollbooth_source(p)).expect("bundled model parses")
}

fn answered(op: &str) -> Formula {
    Formula::diamond(ActionPattern::endpoint("s", op), Formula::True)
}

pub fn responsiveness_prop() -> Formula {
    Formula::ag(Formula::boxed(
        ActionPattern::endpoint("serv", "create"),
        Formula::af(Formula::or(answered("signalOK"), answered("signalFail"))),
    ))
}

pub fn availability_prop() -> Formula {
    Formula::ag(Formula::enabled("serv", "create"))
}

pub fn reliability_prop() -> Formula {
    Formula::ag(Formula::boxed(
        ActionPattern::endpoint("serv", "create"),
        Formula::ef(answered("signalOK")),
    ))
}

//! JSON channel descriptions.
//!
//! ```json
//! {"type":"kraus","convention":"left_adjoint","ops":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}
//! {"type":"affine","T":[[1,0,0],[0,1,0],[0,0,1]],"t":[0,0,0]}
//! {"type":"krsw","lambda":[0.5,0.5,0.5],"t":[0,0,0.25]}
//! {"type":"named","name":"markov","params":{"p":0.3,"q":0.6}}
//! ```
//!
//! Kraus operators are written row-major as `[[re, im], [re, im]]` rows.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AffineChannel, Channel, ChannelError, KrausChannel, KrausConvention, KrswChannel};
use crate::algebra::Mat2;
use crate::zoo;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed channel JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("named channel {name}: missing parameter {param}")]
    MissingParam { name: &'static str, param: &'static str },
    #[error("named channel {name}: unexpected parameter {param}")]
    UnknownParam { name: &'static str, param: String },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedChannel {
    Depolarizing,
    PhaseDamping,
    AmplitudeDamping,
    Trigonometric,
    Markov,
}

impl NamedChannel {
    fn label(self) -> &'static str {
        match self {
            NamedChannel::Depolarizing => "depolarizing",
            NamedChannel::PhaseDamping => "phase_damping",
            NamedChannel::AmplitudeDamping => "amplitude_damping",
            NamedChannel::Trigonometric => "trigonometric",
            NamedChannel::Markov => "markov",
        }
    }

    fn params(self) -> &'static [&'static str] {
        match self {
            NamedChannel::Depolarizing | NamedChannel::PhaseDamping | NamedChannel::AmplitudeDamping => &["p"],
            NamedChannel::Trigonometric => &["u", "v"],
            NamedChannel::Markov => &["p", "q"],
        }
    }
}

pub type ComplexEntry = [f64; 2];
pub type KrausOp = [[ComplexEntry; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Kraus {
        convention: KrausConvention,
        ops: Vec<KrausOp>,
    },
    Affine {
        #[serde(rename = "T")]
        t_lin: [[f64; 3]; 3],
        t: [f64; 3],
    },
    Krsw {
        lambda: [f64; 3],
        t: [f64; 3],
    },
    Named {
        name: NamedChannel,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel spec serializes")
    }

    pub fn affine_of(ch: &AffineChannel) -> Self {
        ChannelSpec::Affine {
            t_lin: *ch.t_lin(),
            t: *ch.t_vec(),
        }
    }

    pub fn build(&self) -> Result<Channel, SpecError> {
        match self {
            ChannelSpec::Kraus { convention, ops } => {
                let ops = ops
                    .iter()
                    .map(|m| {
                        let c = |e: ComplexEntry| Complex64::new(e[0], e[1]);
                        Mat2::new(c(m[0][0]), c(m[0][1]), c(m[1][0]), c(m[1][1]))
                    })
                    .collect();
                Ok(Channel::Kraus(KrausChannel::new(ops, *convention)?))
            }
            ChannelSpec::Affine { t_lin, t } => Ok(Channel::Affine(AffineChannel::new(*t_lin, *t)?)),
            ChannelSpec::Krsw { lambda, t } => Ok(Channel::Krsw(KrswChannel::new(*lambda, *t))),
            ChannelSpec::Named { name, params } => {
                let label = name.label();
                let wanted = name.params();
                if let Some(extra) = params.keys().find(|k| !wanted.contains(&k.as_str())) {
                    return Err(SpecError::UnknownParam {
                        name: label,
                        param: extra.clone(),
                    });
                }
                let get = |param: &'static str| {
                    params
                        .get(param)
                        .copied()
                        .ok_or(SpecError::MissingParam { name: label, param })
                };
                let entry = match name {
                    NamedChannel::Depolarizing => zoo::depolarizing(get("p")?)?,
                    NamedChannel::PhaseDamping => zoo::phase_damping(get("p")?)?,
                    NamedChannel::AmplitudeDamping => zoo::amplitude_damping(get("p")?)?,
                    NamedChannel::Trigonometric => zoo::trigonometric(get("u")?, get("v")?)?,
                    NamedChannel::Markov => zoo::markov_chain(get("p")?, get("q")?)?,
                };
                Ok(Channel::Kraus(entry.channel))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_variant() {
        let k = ChannelSpec::parse(
            r#"{"type":"kraus","convention":"right_adjoint","ops":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#,
        )
        .unwrap();
        assert!(matches!(k.build().unwrap(), Channel::Kraus(_)));
        let a = ChannelSpec::parse(r#"{"type":"affine","T":[[1,0,0],[0,1,0],[0,0,1]],"t":[0,0,0]}"#).unwrap();
        assert!(matches!(a.build().unwrap(), Channel::Affine(_)));
        let r = ChannelSpec::parse(r#"{"type":"krsw","lambda":[1,1,-1],"t":[0,0,0]}"#).unwrap();
        assert!(matches!(r.build().unwrap(), Channel::Krsw(_)));
        let n = ChannelSpec::parse(r#"{"type":"named","name":"markov","params":{"p":0.3,"q":0.6}}"#).unwrap();
        assert!(matches!(n.build().unwrap(), Channel::Kraus(_)));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ChannelSpec::parse(r#"{"type":"affine","T":[[1,0],[0,1]],"t":[0,0,0]}"#).is_err());
        assert!(ChannelSpec::parse(r#"{"type":"bogus"}"#).is_err());
        let missing = ChannelSpec::parse(r#"{"type":"named","name":"markov","params":{"p":0.3}}"#).unwrap();
        assert!(matches!(missing.build(), Err(SpecError::MissingParam { param: "q", .. })));
        let extra = ChannelSpec::parse(r#"{"type":"named","name":"depolarizing","params":{"p":0.3,"x":1}}"#).unwrap();
        assert!(matches!(extra.build(), Err(SpecError::UnknownParam { .. })));
        let bad = ChannelSpec::parse(r#"{"type":"named","name":"depolarizing","params":{"p":1.5}}"#).unwrap();
        assert!(matches!(bad.build(), Err(SpecError::Channel(_))));
    }

    #[test]
    fn affine_json_round_trip() {
        let ch = AffineChannel::from_parts(
            [[0.1, 0.2, 0.0], [0.0, 1.0 / 3.0, 0.0], [0.0, 0.0, 0.7]],
            [0.0, 1e-17, 0.2],
        );
        let back = ChannelSpec::parse(&ChannelSpec::affine_of(&ch).to_json()).unwrap();
        assert_eq!(back, ChannelSpec::affine_of(&ch));
    }
}

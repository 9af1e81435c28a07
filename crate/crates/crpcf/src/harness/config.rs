//! Flat `key=value` config files with `#` comments.

use std::collections::BTreeMap;
use std::fmt;

use crate::params::{ParamError, ProtocolParams, PuTrafficModel};
use crate::sim::{Protocol, SimConfig};

use super::SweepVariable;

const REQUIRED_KEYS: [&str; 16] = [
    "beacon_bytes",
    "poll_bytes",
    "payload_bytes",
    "header_bytes",
    "sifs_us",
    "delta_us",
    "tau_sense_us",
    "tau_switch_us",
    "z_on_us",
    "z_off_us",
    "rate_mbps",
    "num_sm",
    "packets_per_sm",
    "num_channels",
    "seed",
    "protocol",
];

const SWEEP_KEYS: [&str; 3] = ["sweep_variable", "sweep_values", "num_seeds"];

/// A parsed config: the base run plus an optional sweep block.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub sim: SimConfig,
    pub sweep: Option<SweepBlock>,
}

/// The optional sweep block of a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepBlock {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub num_seeds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    MissingKeys(Vec<String>),
    UnknownKey {
        key: String,
        line: usize,
    },
    Malformed {
        line: usize,
        text: String,
    },
    DuplicateKey {
        key: String,
        line: usize,
    },
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    Invariant(ParamError),
    IncompleteSweep {
        missing: &'static str,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::MissingKeys(keys) => {
                write!(f, "missing required keys: {}", keys.join(", "))
            }
            ConfigError::UnknownKey { key, line } => {
                write!(f, "unknown key `{key}` on line {line}")
            }
            ConfigError::Malformed { line, text } => {
                write!(f, "line {line} is not `key=value`: `{text}`")
            }
            ConfigError::DuplicateKey { key, line } => {
                write!(f, "key `{key}` repeated on line {line}")
            }
            ConfigError::BadValue {
                key,
                value,
                expected,
            } => {
                write!(f, "key `{key}`: `{value}` is not {expected}")
            }
            ConfigError::Invariant(e) => write!(f, "invalid configuration: {e}"),
            ConfigError::IncompleteSweep { missing } => {
                write!(f, "sweep block is missing `{missing}`")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<ParamError> for ConfigError {
    fn from(e: ParamError) -> Self {
        ConfigError::Invariant(e)
    }
}

/// Parses a config file body. All sixteen base keys are required; the three
/// sweep keys are optional but `sweep_variable` and `sweep_values` must
/// appear together. Unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<ParsedConfig, ConfigError> {
    let mut raw: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: content.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !REQUIRED_KEYS.contains(&key) && !SWEEP_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                key: key.to_string(),
                line: line_no,
            });
        }
        if raw.insert(key, (line_no, value)).is_some() {
            return Err(ConfigError::DuplicateKey {
                key: key.to_string(),
                line: line_no,
            });
        }
    }

    let missing: Vec<String> = REQUIRED_KEYS
        .iter()
        .filter(|k| !raw.contains_key(**k))
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::MissingKeys(missing));
    }

    let get = |key: &str| raw[key].1;
    let parse_u32 = |key: &'static str| -> Result<u32, ConfigError> {
        get(key).parse().map_err(|_| ConfigError::BadValue {
            key: key.to_string(),
            value: get(key).to_string(),
            expected: "a non-negative integer",
        })
    };
    let parse_f64 = |key: &'static str| -> Result<f64, ConfigError> {
        get(key).parse().map_err(|_| ConfigError::BadValue {
            key: key.to_string(),
            value: get(key).to_string(),
            expected: "a number",
        })
    };

    let params = ProtocolParams {
        beacon_len: parse_u32("beacon_bytes")?,
        poll_len: parse_u32("poll_bytes")?,
        payload_len: parse_u32("payload_bytes")?,
        header_len: parse_u32("header_bytes")?,
        sifs: parse_f64("sifs_us")?,
        prop_delay: parse_f64("delta_us")?,
        tau_sense: parse_f64("tau_sense_us")?,
        tau_switch: parse_f64("tau_switch_us")?,
        rate: parse_f64("rate_mbps")?,
        num_sm: parse_u32("num_sm")?,
        packets_per_sm: parse_u32("packets_per_sm")?,
        num_supp_channels: parse_u32("num_channels")?,
    };
    params.validate()?;

    let pu = PuTrafficModel {
        z_on: parse_f64("z_on_us")?,
        z_off: parse_f64("z_off_us")?,
    };
    pu.validate()?;

    let seed: u64 = get("seed").parse().map_err(|_| ConfigError::BadValue {
        key: "seed".to_string(),
        value: get("seed").to_string(),
        expected: "an unsigned 64-bit integer",
    })?;

    let protocol = match get("protocol") {
        "pcf" => Protocol::Pcf,
        "crpcf" => Protocol::Crpcf,
        other => {
            return Err(ConfigError::BadValue {
                key: "protocol".to_string(),
                value: other.to_string(),
                expected: "`pcf` or `crpcf`",
            })
        }
    };

    let sweep = match (raw.get("sweep_variable"), raw.get("sweep_values")) {
        (None, None) => {
            if raw.contains_key("num_seeds") {
                return Err(ConfigError::IncompleteSweep {
                    missing: "sweep_variable",
                });
            }
            None
        }
        (Some(_), None) => {
            return Err(ConfigError::IncompleteSweep {
                missing: "sweep_values",
            })
        }
        (None, Some(_)) => {
            return Err(ConfigError::IncompleteSweep {
                missing: "sweep_variable",
            })
        }
        (Some(&(_, var)), Some(&(_, values))) => {
            let variable = var
                .parse::<SweepVariable>()
                .map_err(|_| ConfigError::BadValue {
                    key: "sweep_variable".to_string(),
                    value: var.to_string(),
                    expected: "one of M, L, N, X, gamma",
                })?;
            let values: Vec<f64> = values
                .split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| ConfigError::BadValue {
                        key: "sweep_values".to_string(),
                        value: v.trim().to_string(),
                        expected: "a comma-separated list of numbers",
                    })
                })
                .collect::<Result<_, _>>()?;
            let num_seeds = match raw.get("num_seeds") {
                Some(&(_, n)) => n.parse().map_err(|_| ConfigError::BadValue {
                    key: "num_seeds".to_string(),
                    value: n.to_string(),
                    expected: "a positive integer",
                })?,
                None => super::DEFAULT_NUM_SEEDS,
            };
            Some(SweepBlock {
                variable,
                values,
                num_seeds,
            })
        }
    };

    Ok(ParsedConfig {
        sim: SimConfig {
            params,
            pu,
            seed,
            protocol,
        },
        sweep,
    })
}

/// Serializes a config in the exact key set `parse_config` accepts.
pub fn render_config(config: &SimConfig) -> String {
    let p = &config.params;
    format!(
        "beacon_bytes={}\npoll_bytes={}\npayload_bytes={}\nheader_bytes={}\n\
         sifs_us={}\ndelta_us={}\ntau_sense_us={}\ntau_switch_us={}\n\
         z_on_us={}\nz_off_us={}\nrate_mbps={}\nnum_sm={}\npackets_per_sm={}\n\
         num_channels={}\nseed={}\nprotocol={}\n",
        p.beacon_len,
        p.poll_len,
        p.payload_len,
        p.header_len,
        p.sifs,
        p.prop_delay,
        p.tau_sense,
        p.tau_switch,
        config.pu.z_on,
        config.pu.z_off,
        p.rate,
        p.num_sm,
        p.packets_per_sm,
        p.num_supp_channels,
        config.seed,
        config.protocol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_text() -> String {
        render_config(&SimConfig::default())
    }

    #[test]
    fn full_key_set_round_trips_defaults() {
        let parsed = parse_config(&default_text()).unwrap();
        assert_eq!(parsed.sim, SimConfig::default());
        assert!(parsed.sweep.is_none());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = format!(
            "# reference parameters\n\n{}\n  # trailing comment\n",
            default_text()
        );
        assert!(parse_config(&text).is_ok());
    }

    #[test]
    fn empty_text_lists_all_missing_keys() {
        let err = parse_config("").unwrap_err();
        match err {
            ConfigError::MissingKeys(keys) => {
                assert_eq!(keys.len(), 16);
                assert!(keys.contains(&"beacon_bytes".to_string()));
                assert!(keys.contains(&"protocol".to_string()));
            }
            other => panic!("expected MissingKeys, got {other:?}"),
        }
    }

    #[test]
    fn gap_ordering_violation_names_the_invariant() {
        let text = default_text().replace("tau_sense_us=300", "tau_sense_us=100");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("tau_sense_us") && msg.contains("tau_switch_us"),
            "{msg}"
        );
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{}mystery=1\n", default_text());
        match parse_config(&text).unwrap_err() {
            ConfigError::UnknownKey { key, .. } => assert_eq!(key, "mystery"),
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_value_names_key() {
        let text = default_text().replace("num_sm=600", "num_sm=many");
        let msg = parse_config(&text).unwrap_err().to_string();
        assert!(msg.contains("num_sm") && msg.contains("many"), "{msg}");
    }

    #[test]
    fn sweep_block_parses() {
        let text = format!(
            "{}sweep_variable=N\nsweep_values=1, 3, 5\nnum_seeds=7\n",
            default_text()
        );
        let sweep = parse_config(&text).unwrap().sweep.unwrap();
        assert_eq!(sweep.variable, SweepVariable::NumChannels);
        assert_eq!(sweep.values, vec![1.0, 3.0, 5.0]);
        assert_eq!(sweep.num_seeds, 7);
    }

    #[test]
    fn sweep_block_must_be_complete() {
        let text = format!("{}sweep_variable=M\n", default_text());
        match parse_config(&text).unwrap_err() {
            ConfigError::IncompleteSweep { missing } => assert_eq!(missing, "sweep_values"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_key_rejected() {
        let text = format!("{}seed=2\n", default_text());
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::DuplicateKey { .. }
        ));
    }
}

//! Reading and writing the Aldebaran (`.aut`) format.
//!
//! ```text
//! des (<initial>,<num_transitions>,<num_states>)
//! (<from>,"<label>",<to>)
//! (<from>,<label>,<to>)
//! ```

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::lts::{Lts, LtsBuilder, DEFAULT_TAU, TAU};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutError {
    #[error("line {line}: malformed header, expected `des (<initial>,<transitions>,<states>)`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed transition, expected `(<from>,\"<label>\",<to>)`")]
    MalformedTransition { line: usize },
    #[error("line {line}: state {state} out of range (the LTS has {num_states} states)")]
    StateOutOfRange {
        line: usize,
        state: usize,
        num_states: usize,
    },
    #[error("line {line}: header declares {declared} transitions but {found} were read")]
    TransitionCountMismatch {
        line: usize,
        declared: usize,
        found: usize,
    },
    #[error("line 1: missing header")]
    MissingHeader,
}

impl AutError {
    pub fn line(&self) -> usize {
        match *self {
            AutError::MalformedHeader { line }
            | AutError::MalformedTransition { line }
            | AutError::StateOutOfRange { line, .. }
            | AutError::TransitionCountMismatch { line, .. } => line,
            AutError::MissingHeader => 1,
        }
    }
}

/// Names that denote the internal action.
#[derive(Debug, Clone)]
pub struct TauNames {
    primary: String,
}

impl TauNames {
    pub fn new(primary: &str) -> Self {
        TauNames {
            primary: primary.to_string(),
        }
    }

    /// The configured name, and `i` as is customary for `.aut` files.
    pub fn is_tau(&self, label: &str) -> bool {
        label == self.primary || label == "i"
    }
}

impl Default for TauNames {
    fn default() -> Self {
        TauNames::new(DEFAULT_TAU)
    }
}

pub fn parse_aut(text: &str) -> Result<Lts, AutError> {
    parse_aut_with(text, &TauNames::default())
}

pub fn read_aut(path: &Path, tau: &TauNames) -> io::Result<Result<Lts, AutError>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_aut_with(&text, tau))
}

pub fn parse_aut_with(text: &str, tau: &TauNames) -> Result<Lts, AutError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(AutError::MissingHeader)?;
    let (initial, declared, num_states) =
        parse_header(header).ok_or(AutError::MalformedHeader { line: header_line })?;
    if num_states == 0 {
        return Err(AutError::MalformedHeader { line: header_line });
    }
    if initial >= num_states {
        return Err(AutError::StateOutOfRange {
            line: header_line,
            state: initial,
            num_states,
        });
    }

    let mut builder = LtsBuilder::new(num_states, initial);
    builder.set_tau_name(&tau.primary);
    let mut found = 0usize;
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        let (from, label, to) =
            parse_transition(content).ok_or(AutError::MalformedTransition { line })?;
        for state in [from, to] {
            if state >= num_states {
                return Err(AutError::StateOutOfRange {
                    line,
                    state,
                    num_states,
                });
            }
        }
        let action = if tau.is_tau(label) {
            TAU
        } else {
            builder.action(label)
        };
        builder.add_transition(from, action, to);
        found += 1;
    }
    if found != declared {
        return Err(AutError::TransitionCountMismatch {
            line: last_line,
            declared,
            found,
        });
    }
    Ok(builder.build())
}

fn parse_header(line: &str) -> Option<(usize, usize, usize)> {
    let rest = line.strip_prefix("des")?.trim_start();
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    let mut parts = inner.split(',').map(|p| p.trim().parse::<usize>());
    let initial = parts.next()?.ok()?;
    let transitions = parts.next()?.ok()?;
    let states = parts.next()?.ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((initial, transitions, states))
}

fn parse_transition(line: &str) -> Option<(usize, &str, usize)> {
    let inner = line.strip_prefix('(')?.strip_suffix(')')?;
    let (from, rest) = inner.split_once(',')?;
    let (label, to) = rest.rsplit_once(',')?;
    let label = label.trim();
    let label = match label.strip_prefix('"') {
        Some(quoted) => quoted.strip_suffix('"')?,
        None => label,
    };
    Some((from.trim().parse().ok()?, label, to.trim().parse().ok()?))
}

/// Serialises an LTS; τ is written using the LTS's own τ name.
pub fn write_aut(lts: &Lts) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "des ({},{},{})",
        lts.initial(),
        lts.num_transitions(),
        lts.num_states()
    );
    for (s, a, t) in lts.transitions() {
        let _ = writeln!(out, "({s},\"{}\",{t})", lts.label(a));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::mark_divergent;

    #[test]
    fn parses_t0() {
        let lts = parse_aut("des (0,2,3)\n(0,\"req\",1)\n(1,\"20\",2)\n").unwrap();
        assert_eq!(lts.num_states(), 3);
        assert_eq!(lts.num_transitions(), 2);
        assert_eq!(lts.initial(), 0);
        let visible: Vec<&str> = lts.visible_actions().map(|a| lts.label(a)).collect();
        assert_eq!(visible, ["req", "20"]);
    }

    #[test]
    fn parses_single_state() {
        let lts = parse_aut("des (0,0,1)\n").unwrap();
        assert_eq!(lts.num_states(), 1);
        assert_eq!(lts.num_transitions(), 0);
        assert_eq!(lts.visible_actions().len(), 0);
    }

    #[test]
    fn tau_self_loop_diverges() {
        let lts = parse_aut("des (0,1,1)\n(0,\"tau\",0)\n").unwrap();
        assert!(!lts.is_stable(0));
        assert!(mark_divergent(&lts).is_diverging(0));
    }

    #[test]
    fn unquoted_labels_and_i_as_tau() {
        let lts = parse_aut("des (0,2,2)\n(0,i,1)\n(1,go,0)\n").unwrap();
        assert_eq!(lts.outgoing(0), &[(TAU, 1)]);
        assert_eq!(lts.action_index("go"), Some(1));
    }

    #[test]
    fn custom_tau_name() {
        let lts = parse_aut_with("des (0,1,2)\n(0,\"internal\",1)\n", &TauNames::new("internal")).unwrap();
        assert_eq!(lts.outgoing(0), &[(TAU, 1)]);
        assert_eq!(lts.visible_actions().len(), 0);
        // The default name is then an ordinary label.
        let lts = parse_aut_with("des (0,1,2)\n(0,\"tau\",1)\n", &TauNames::new("internal")).unwrap();
        assert_eq!(lts.action_index("tau"), Some(1));
    }

    #[test]
    fn labels_may_contain_commas() {
        let lts = parse_aut("des (0,1,2)\n(0,\"send(1,2)\",1)\n").unwrap();
        assert_eq!(lts.action_index("send(1,2)"), Some(1));
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(
            parse_aut("hello\n").unwrap_err(),
            AutError::MalformedHeader { line: 1 }
        );
        assert_eq!(parse_aut("").unwrap_err(), AutError::MissingHeader);
        assert_eq!(
            parse_aut("des (0,1,2)\n(0,\"a\",5)\n").unwrap_err(),
            AutError::StateOutOfRange {
                line: 2,
                state: 5,
                num_states: 2
            }
        );
        assert_eq!(
            parse_aut("des (0,2,2)\n(0,\"a\",1)\n").unwrap_err(),
            AutError::TransitionCountMismatch {
                line: 2,
                declared: 2,
                found: 1
            }
        );
        let err = parse_aut("des (0,2,2)\n(0,\"a\",1)\n(0 \"a\" 1)\n").unwrap_err();
        assert_eq!(err, AutError::MalformedTransition { line: 3 });
        assert_eq!(err.line(), 3);
        assert!(matches!(
            parse_aut("des (4,0,2)\n").unwrap_err(),
            AutError::StateOutOfRange { line: 1, .. }
        ));
    }

    #[test]
    fn write_then_parse() {
        let lts = crate::fixtures::spec_s0();
        let text = write_aut(&lts);
        let reparsed = parse_aut(&text).unwrap();
        assert_eq!(write_aut(&reparsed), text);
        let mut original: Vec<_> = lts.transitions().map(|(s, a, t)| (s, lts.label(a), t)).collect();
        let mut round_trip: Vec<_> = reparsed
            .transitions()
            .map(|(s, a, t)| (s, reparsed.label(a), t))
            .collect();
        original.sort();
        round_trip.sort();
        assert_eq!(original, round_trip);
    }
}

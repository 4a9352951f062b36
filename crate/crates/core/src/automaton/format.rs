//! Line-oriented text format.
//!
//! ```text
//! sda <base> <arity> <num_states> <initial>
//! t <state> <d1> .. <d_arity> <target>
//! ```
//!
//! Transition lines may appear in any order; blank lines and `#` comments are
//! ignored. The writer emits transitions sorted by state, then letter.

use std::fmt::Write as _;

use super::SafetyAutomaton;
use crate::error::{Error, Result};

pub fn write_text(a: &SafetyAutomaton) -> String {
    let mut out = String::new();
    let alphabet = a.alphabet();
    let _ = writeln!(
        out,
        "sda {} {} {} {}",
        a.base(),
        a.arity(),
        a.num_states(),
        a.initial().unwrap_or(0)
    );
    for q in 0..a.num_states() {
        for &(letter, target) in a.transitions(q) {
            let _ = write!(out, "t {q}");
            for d in alphabet.decode(letter) {
                let _ = write!(out, " {d}");
            }
            let _ = writeln!(out, " {target}");
        }
    }
    out
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

pub fn read_text(text: &str) -> Result<SafetyAutomaton> {
    let mut header: Option<(u32, usize, usize, usize)> = None;
    let mut transitions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let numbers: Vec<u64> = fields
            .map(|f| {
                f.parse::<u64>()
                    .map_err(|_| format_err(line_no, format!("expected a number, found `{f}`")))
            })
            .collect::<Result<_>>()?;
        match tag {
            "sda" => {
                if header.is_some() {
                    return Err(format_err(line_no, "duplicate header"));
                }
                let [base, arity, states, initial] = numbers[..] else {
                    return Err(format_err(
                        line_no,
                        "header needs `sda <base> <arity> <num_states> <initial>`",
                    ));
                };
                if base < 2 || base > u32::MAX as u64 {
                    return Err(format_err(line_no, format!("invalid base {base}")));
                }
                if arity == 0 {
                    return Err(format_err(line_no, "arity must be at least 1"));
                }
                if states > 0 && initial >= states {
                    return Err(format_err(
                        line_no,
                        format!("initial state {initial} out of range"),
                    ));
                }
                header = Some((
                    base as u32,
                    arity as usize,
                    states as usize,
                    initial as usize,
                ));
            }
            "t" => {
                let Some((base, arity, states, _)) = header else {
                    return Err(format_err(line_no, "transition before header"));
                };
                if numbers.len() != arity + 2 {
                    return Err(format_err(
                        line_no,
                        format!(
                            "transition needs {} fields, found {}",
                            arity + 2,
                            numbers.len()
                        ),
                    ));
                }
                let state = numbers[0] as usize;
                let target = numbers[arity + 1] as usize;
                if state >= states || target >= states {
                    return Err(format_err(line_no, "state index out of range"));
                }
                let mut letter: u64 = 0;
                for &d in &numbers[1..=arity] {
                    if d >= base as u64 {
                        return Err(format_err(
                            line_no,
                            format!("digit {d} out of range for base {base}"),
                        ));
                    }
                    letter = letter * base as u64 + d;
                }
                transitions.push((line_no, state, letter as u32, target));
            }
            other => return Err(format_err(line_no, format!("unknown line tag `{other}`"))),
        }
    }
    let Some((base, arity, states, initial)) = header else {
        return Err(format_err(1, "missing `sda` header"));
    };
    // report nondeterminism against the line that introduced it
    let mut seen = std::collections::HashMap::new();
    for &(line, state, letter, target) in &transitions {
        if let Some(&(prev, _)) = seen.get(&(state, letter)).filter(|&&(_, t)| t != target) {
            return Err(format_err(
                line,
                format!("second transition from state {state} on the same letter (first on line {prev})"),
            ));
        }
        seen.insert((state, letter), (line, target));
    }
    SafetyAutomaton::from_transitions(
        base,
        arity,
        states,
        initial,
        transitions.into_iter().map(|(_, s, l, t)| (s, l, t)),
    )
    .map_err(|e| match e {
        Error::AlphabetTooLarge { .. } => format_err(1, e.to_string()),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_sorted_lines() {
        let a = SafetyAutomaton::from_transitions(3, 1, 1, 0, [(0, 2, 0), (0, 0, 0)]).unwrap();
        assert_eq!(write_text(&a), "sda 3 1 1 0\nt 0 0 0\nt 0 2 0\n");
    }

    #[test]
    fn reads_unordered_with_comments() {
        let text = "# carpet row\nsda 3 2 1 0\nt 0 2 2 0\n\nt 0 0 0 0 # origin\n";
        let a = read_text(text).unwrap();
        assert_eq!(a.arity(), 2);
        assert_eq!(a.transitions(0), &[(0, 0), (8, 0)]);
    }

    #[test]
    fn digit_out_of_range_names_line() {
        let err = read_text("sda 3 1 1 0\nt 0 0 0\nt 0 3 0\n").unwrap_err();
        match err {
            Error::Format { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("digit 3"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_text(""), Err(Error::Format { line: 1, .. })));
        assert!(matches!(
            read_text("t 0 0 0"),
            Err(Error::Format { line: 1, .. })
        ));
        assert!(matches!(
            read_text("sda 3 1 1 0\nt 0 x 0"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(matches!(
            read_text("sda 2 1 2 0\nt 0 0 0\nt 0 0 1\n"),
            Err(Error::Format { line: 3, .. })
        ));
        assert!(matches!(
            read_text("sda 2 1 1 0\nq 1\n"),
            Err(Error::Format { line: 2, .. })
        ));
    }

    #[test]
    fn empty_automaton_round_trips() {
        let e = SafetyAutomaton::empty(2, 2).unwrap();
        let text = write_text(&e);
        assert_eq!(text, "sda 2 2 0 0\n");
        assert_eq!(read_text(&text).unwrap(), e);
    }
}

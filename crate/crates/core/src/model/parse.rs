use std::collections::BTreeSet;

use super::{Action, MachineClass, MachineParts, Mode, StackMachine, StackSym, Transition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token {
    text: String,
    quoted: bool,
}

/// Splits a line into tokens. `#` outside single quotes starts a comment.
/// In transition lines `,`, `/` and `->` are separators even without
/// surrounding whitespace.
fn tokenize(line: &str, lineno: usize, punct: bool) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<Token>| {
        if !cur.is_empty() {
            out.push(Token {
                text: std::mem::take(cur),
                quoted: false,
            });
        }
    };
    while let Some(c) = chars.next() {
        match c {
            '#' => break,
            '\'' => {
                flush(&mut cur, &mut out);
                let mut lit = String::new();
                loop {
                    match chars.next() {
                        Some('\'') => break,
                        Some(ch) => lit.push(ch),
                        None => {
                            return Err(Error::Syntax {
                                line: lineno,
                                message: "unterminated quote".into(),
                            })
                        }
                    }
                }
                if lit.is_empty() {
                    return Err(Error::Syntax {
                        line: lineno,
                        message: "empty quoted symbol".into(),
                    });
                }
                out.push(Token {
                    text: lit,
                    quoted: true,
                });
            }
            c if c.is_whitespace() => flush(&mut cur, &mut out),
            ',' | '/' if punct => {
                flush(&mut cur, &mut out);
                out.push(Token {
                    text: c.to_string(),
                    quoted: false,
                });
            }
            '-' if punct && chars.peek() == Some(&'>') => {
                chars.next();
                flush(&mut cur, &mut out);
                out.push(Token {
                    text: "->".into(),
                    quoted: false,
                });
            }
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut out);
    Ok(out)
}

fn has_arrow(line: &str) -> bool {
    let mut quoted = false;
    let mut prev = ' ';
    for c in line.chars() {
        match c {
            '\'' => quoted = !quoted,
            '#' if !quoted => return false,
            '>' if !quoted && prev == '-' => return true,
            _ => {}
        }
        prev = c;
    }
    false
}

#[derive(Default)]
struct Header {
    class: Option<MachineClass>,
    name: String,
    input: Option<Vec<String>>,
    stack: Option<Vec<String>>,
    states: Option<(Vec<String>, Option<Vec<Mode>>)>,
    initial: Option<String>,
    finals: Option<Vec<String>>,
}

/// Parses a machine description and validates it against its declared class.
pub fn parse_machine(text: &str) -> Result<StackMachine> {
    let mut h = Header::default();
    let mut raw_transitions: Vec<(usize, Vec<Token>)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if has_arrow(line) {
            raw_transitions.push((lineno, tokenize(line, lineno, true)?));
            continue;
        }
        let toks = tokenize(line, lineno, false)?;
        let Some(first) = toks.first() else { continue };
        let syntax = |message: String| Error::Syntax { line: lineno, message };
        let rest = || toks[1..].iter().map(|t| t.text.clone()).collect::<Vec<_>>();
        let once = |present: bool, what: &str| {
            if present {
                Err(syntax(format!("duplicate `{what}` line")))
            } else {
                Ok(())
            }
        };
        match (first.quoted, first.text.as_str()) {
            (false, "machine") => {
                once(h.class.is_some(), "machine")?;
                let class = toks.get(1).ok_or_else(|| syntax("missing machine class".into()))?;
                h.class = Some(match class.text.as_str() {
                    "SA" => MachineClass::Sa,
                    "NESA" => MachineClass::Nesa,
                    "CSA" => MachineClass::Csa,
                    other => return Err(syntax(format!("unknown machine class `{other}`"))),
                });
                for t in &toks[2..] {
                    match t.text.strip_prefix("name=") {
                        Some(n) if !n.is_empty() => h.name = n.to_string(),
                        _ => return Err(syntax(format!("unexpected `{}` in header", t.text))),
                    }
                }
            }
            (false, "input:") => {
                once(h.input.is_some(), "input:")?;
                h.input = Some(rest());
            }
            (false, "stack:") => {
                once(h.stack.is_some(), "stack:")?;
                h.stack = Some(rest());
            }
            (false, "states:") => {
                once(h.states.is_some(), "states:")?;
                let mut names = Vec::new();
                let mut modes = Vec::new();
                for t in &toks[1..] {
                    let (name, mode) = if t.quoted {
                        (t.text.clone(), None)
                    } else if let Some(n) = t.text.strip_suffix("/w") {
                        (n.to_string(), Some(Mode::Write))
                    } else if let Some(n) = t.text.strip_suffix("/r") {
                        (n.to_string(), Some(Mode::Read))
                    } else {
                        (t.text.clone(), None)
                    };
                    if name.is_empty() {
                        return Err(syntax("empty state name".into()));
                    }
                    names.push(name);
                    modes.push(mode);
                }
                let partition = if modes.iter().all(Option::is_none) {
                    None
                } else if modes.iter().all(Option::is_some) {
                    Some(modes.into_iter().flatten().collect())
                } else {
                    return Err(syntax("either all states or none carry a /w or /r suffix".into()));
                };
                h.states = Some((names, partition));
            }
            (false, "initial:") => {
                once(h.initial.is_some(), "initial:")?;
                if toks.len() != 2 {
                    return Err(syntax("`initial:` takes exactly one state".into()));
                }
                h.initial = Some(toks[1].text.clone());
            }
            (false, "final:") | (false, "finals:") => {
                once(h.finals.is_some(), "final:")?;
                h.finals = Some(rest());
            }
            (_, other) => return Err(syntax(format!("unrecognized line starting with `{other}`"))),
        }
    }

    let missing = |what: &str| Error::Syntax {
        line: 0,
        message: format!("missing `{what}` line"),
    };
    let class = h.class.ok_or_else(|| missing("machine"))?;
    let input_alphabet = h.input.ok_or_else(|| missing("input:"))?;
    let stack_alphabet = h.stack.ok_or_else(|| missing("stack:"))?;
    let (states, partition) = h.states.ok_or_else(|| missing("states:"))?;
    let initial_name = h.initial.ok_or_else(|| missing("initial:"))?;
    let final_names = h.finals.unwrap_or_default();

    let state_of = |name: &str, line: usize| {
        states.iter().position(|s| s == name).ok_or_else(|| Error::Syntax {
            line,
            message: format!("unknown state `{name}`"),
        })
    };
    let initial = state_of(&initial_name, 0)?;
    let mut finals = BTreeSet::new();
    for f in &final_names {
        finals.insert(state_of(f, 0)?);
    }

    let mut transitions = Vec::with_capacity(raw_transitions.len());
    for (lineno, toks) in raw_transitions {
        let syntax = |message: String| Error::Syntax { line: lineno, message };
        let text: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        let shape_ok = toks.len() >= 8
            && !toks[1].quoted
            && text[1] == ","
            && !toks[3].quoted
            && text[3] == "/"
            && !toks[5].quoted
            && text[5] == "->";
        if !shape_ok {
            return Err(syntax("expected `q , a / x -> p action`".into()));
        }
        let from = state_of(text[0], lineno)?;
        let to = state_of(text[6], lineno)?;
        let input = if !toks[2].quoted && text[2] == "_" {
            None
        } else {
            Some(
                input_alphabet
                    .iter()
                    .position(|s| s == text[2])
                    .ok_or_else(|| syntax(format!("unknown input symbol `{}`", text[2])))?,
            )
        };
        let stack = match (toks[4].quoted, text[4]) {
            (false, "BOT") => StackSym::Bottom,
            (false, "TOP") => StackSym::Top,
            (_, s) => StackSym::Sym(
                stack_alphabet
                    .iter()
                    .position(|x| x == s)
                    .ok_or_else(|| syntax(format!("unknown stack symbol `{s}`")))?,
            ),
        };
        let action = match (text[7], toks.len()) {
            ("wstay", 8) => Action::WStay,
            ("pop", 8) => Action::Pop,
            ("left", 8) => Action::Left,
            ("rstay", 8) => Action::RStay,
            ("right", 8) => Action::Right,
            ("push", 9) => Action::Push(
                stack_alphabet
                    .iter()
                    .position(|x| x == text[8])
                    .ok_or_else(|| syntax(format!("push of unknown stack symbol `{}`", text[8])))?,
            ),
            (a, _) => return Err(syntax(format!("malformed action starting at `{a}`"))),
        };
        if action == Action::Pop && stack == StackSym::Bottom {
            return Err(syntax("pop on BOT".into()));
        }
        if action.is_write() && stack == StackSym::Top {
            return Err(syntax("write action on TOP can never fire".into()));
        }
        transitions.push(Transition {
            from,
            input,
            stack,
            to,
            action,
        });
    }

    let parts = MachineParts {
        name: h.name,
        states,
        input_alphabet,
        stack_alphabet,
        transitions,
        initial,
        finals,
        partition,
    };
    StackMachine::new(class, parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
machine CSA name=t
input: a '#'
stack: x
states: p/w q/r   # comment
initial: p
final: q
p , a / BOT -> p push x
p,_/x->q wstay
q , '#' / TOP -> q left
";

    #[test]
    fn parses_quoted_and_compact_lines() {
        let m = parse_machine(SMALL).unwrap();
        assert_eq!(m.input_alphabet(), ["a", "#"]);
        assert_eq!(m.transitions().len(), 3);
        assert_eq!(m.transitions()[2].input, Some(1));
        assert_eq!(m.transitions()[2].stack, StackSym::Top);
        assert_eq!(m.partition().unwrap(), [Mode::Write, Mode::Read]);
    }

    #[test]
    fn display_round_trips() {
        let m = parse_machine(SMALL).unwrap();
        let again = parse_machine(&m.to_string()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn pop_in_nesa_is_a_class_violation() {
        let text = "machine NESA name=x\ninput: a\nstack: x\nstates: p\ninitial: p\nfinal: p\np , a / x -> p pop\n";
        match parse_machine(text) {
            Err(Error::ClassViolation { message, .. }) => assert!(message.contains("pop")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn read_to_write_is_rejected() {
        let text =
            "machine CSA name=x\ninput: a\nstack: x\nstates: p/w q/r\ninitial: p\nfinal: q\nq , a / BOT -> p rstay\n";
        assert!(matches!(parse_machine(text), Err(Error::ClassViolation { .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = "machine SA name=x\ninput: a\nstack: x\nstates: p\ninitial: p\nfinal: p\np , b / x -> p pop\n";
        assert!(matches!(parse_machine(text), Err(Error::Syntax { line: 7, .. })));
        let text = "machine SA name=x\ninput: a\nstack: x\nstates: p\ninitial: p\nbogus\n";
        assert!(matches!(parse_machine(text), Err(Error::Syntax { line: 6, .. })));
    }
}

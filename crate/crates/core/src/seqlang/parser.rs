//! Recursive-descent parser over the token stream. The first error is
//! reported with its expected-set; no partial documents are returned.

use super::lexer::{tokenize, Token, TokenKind};
use super::lower::OVERRIDE_KEYS;
use super::{ParseError, SequenceDoc, Stmt, StmtKind};

const TIME_UNITS: &[&str] = &["ns", "us", "s"];
const ANGLE_UNITS: &[&str] = &["deg", "rad"];
const STATEMENT_STARTS: &[&str] = &["pulse", "wait", "readout", "measure", "set"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Position just past the final token, for end-of-input diagnostics.
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message).expecting(expected)
    }

    fn expect_number(&mut self) -> Result<(f64, usize, usize), ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Number => {
                let (line, col) = (t.line, t.col);
                let value: f64 = t.lexeme.parse().map_err(|_| {
                    ParseError::new(line, col, format!("malformed number '{}'", t.lexeme))
                })?;
                self.pos += 1;
                Ok((value, line, col))
            }
            Some(t) => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected a number, found '{}'", t.lexeme),
            )
            .expecting(&["number"])),
            None => Err(self.error("expected a number, found end of input", &["number"])),
        }
    }

    fn expect_unit(&mut self, allowed: &[&str]) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Unit && allowed.contains(&t.lexeme.as_str()) => {
                let u = t.lexeme.clone();
                self.pos += 1;
                Ok(u)
            }
            Some(t) => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected a unit, found '{}'", t.lexeme),
            )
            .expecting(allowed)),
            None => Err(self.error("expected a unit, found end of input", allowed)),
        }
    }

    /// Time value normalized to seconds.
    fn time(&mut self) -> Result<(f64, usize, usize), ParseError> {
        let (value, line, col) = self.expect_number()?;
        let unit = self.expect_unit(TIME_UNITS)?;
        let scale = match unit.as_str() {
            "ns" => 1e-9,
            "us" => 1e-6,
            _ => 1.0,
        };
        Ok((value * scale, line, col))
    }

    /// Angle value normalized to radians.
    fn angle(&mut self) -> Result<f64, ParseError> {
        let (value, _, _) = self.expect_number()?;
        let unit = self.expect_unit(ANGLE_UNITS)?;
        Ok(match unit.as_str() {
            "deg" => value.to_radians(),
            _ => value,
        })
    }
}

/// Parse a source text into a [`SequenceDoc`].
pub fn parse(source: &str) -> Result<SequenceDoc, ParseError> {
    let tokens = tokenize(source)?;
    let end = tokens
        .last()
        .map_or((1, 1), |t| (t.line, t.col + t.lexeme.chars().count()));
    let mut p = Parser { tokens, pos: 0, end };
    let mut doc = SequenceDoc::default();

    while let Some(t) = p.peek() {
        let (line, col) = (t.line, t.col);
        if t.kind != TokenKind::Keyword {
            return Err(ParseError::new(
                line,
                col,
                format!("expected a statement, found '{}'", t.lexeme),
            )
            .expecting(STATEMENT_STARTS));
        }
        match t.lexeme.as_str() {
            "set" => {
                p.next();
                let key = match p.peek() {
                    Some(t) if t.kind == TokenKind::Identifier => {
                        let k = t.lexeme.clone();
                        let pos = (t.line, t.col);
                        p.pos += 1;
                        (k, pos)
                    }
                    _ => return Err(p.error("expected a setting name", &["identifier"])),
                };
                match p.peek() {
                    Some(t) if t.kind == TokenKind::Punctuation && t.lexeme == "=" => {
                        p.pos += 1;
                    }
                    _ => return Err(p.error("expected '='", &["="])),
                }
                let (value, vline, vcol) = p.expect_number()?;
                let (name, (kline, kcol)) = key;
                if !OVERRIDE_KEYS.iter().any(|(k, _)| *k == name) {
                    let known: Vec<&str> = OVERRIDE_KEYS.iter().map(|(k, _)| *k).collect();
                    return Err(ParseError::new(
                        kline,
                        kcol,
                        format!("unknown setting '{name}'"),
                    )
                    .expecting(&known));
                }
                let check = OVERRIDE_KEYS.iter().find(|(k, _)| *k == name).unwrap().1;
                check(value).map_err(|msg| ParseError::new(vline, vcol, msg))?;
                doc.settings.insert(name, value);
            }
            "pulse" => {
                p.next();
                match p.peek() {
                    Some(t) if t.kind == TokenKind::Identifier && t.lexeme == "x" => {
                        p.pos += 1;
                    }
                    Some(t) => {
                        return Err(ParseError::new(
                            t.line,
                            t.col,
                            format!("unsupported pulse axis '{}'", t.lexeme),
                        )
                        .expecting(&["x"]))
                    }
                    None => return Err(p.error("expected a pulse axis", &["x"])),
                }
                let kind = match p.peek() {
                    Some(t) if t.kind == TokenKind::Keyword && t.lexeme == "for" => {
                        p.pos += 1;
                        let (duration, dline, dcol) = p.time()?;
                        if duration < 0.0 {
                            return Err(ParseError::new(
                                dline,
                                dcol,
                                "pulse duration must be non-negative",
                            ));
                        }
                        StmtKind::PulseDuration { duration }
                    }
                    _ => StmtKind::PulseAngle { angle: p.angle()? },
                };
                doc.statements.push(Stmt { kind, line, col });
            }
            "wait" => {
                p.next();
                let (duration, dline, dcol) = p.time()?;
                if duration < 0.0 {
                    return Err(ParseError::new(dline, dcol, "wait duration must be non-negative"));
                }
                doc.statements.push(Stmt { kind: StmtKind::Wait { duration }, line, col });
            }
            "readout" => {
                p.next();
                let on = match p.peek() {
                    Some(t) if t.kind == TokenKind::Keyword && t.lexeme == "on" => true,
                    Some(t) if t.kind == TokenKind::Keyword && t.lexeme == "off" => false,
                    _ => return Err(p.error("expected 'on' or 'off'", &["on", "off"])),
                };
                p.pos += 1;
                doc.statements.push(Stmt { kind: StmtKind::Readout { on }, line, col });
            }
            "measure" => {
                p.next();
                doc.statements.push(Stmt { kind: StmtKind::Measure, line, col });
            }
            other => {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("'{other}' cannot start a statement"),
                )
                .expecting(STATEMENT_STARTS))
            }
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_demo_sequence() {
        let src = "\
# prep, conditional double pulse, final readout
pulse x for 1.7ns
readout on
pulse x 90deg
wait 5.5ns
pulse x 90deg
readout off
readout on
measure
readout off
";
        let doc = parse(src).unwrap();
        assert_eq!(doc.statements.len(), 9);
        assert!(matches!(doc.statements[0].kind, StmtKind::PulseDuration { duration } if (duration - 1.7e-9).abs() < 1e-24));
        assert!(matches!(doc.statements[3].kind, StmtKind::Wait { duration } if (duration - 5.5e-9).abs() < 1e-24));
        assert!(matches!(doc.statements[7].kind, StmtKind::Measure));
    }

    #[test]
    fn angles_normalize_to_radians() {
        let doc = parse("pulse x 90deg\npulse x 1.5rad\n").unwrap();
        assert!(matches!(doc.statements[0].kind, StmtKind::PulseAngle { angle } if (angle - std::f64::consts::FRAC_PI_2).abs() < 1e-15));
        assert!(matches!(doc.statements[1].kind, StmtKind::PulseAngle { angle } if (angle - 1.5).abs() < 1e-15));
    }

    #[test]
    fn negative_wait_rejected_at_its_position() {
        let err = parse("wait -3ns").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));
        assert!(err.message.contains("non-negative"));
    }

    #[test]
    fn negative_angles_allowed() {
        let doc = parse("pulse x -30deg").unwrap();
        assert!(matches!(doc.statements[0].kind, StmtKind::PulseAngle { angle } if angle < 0.0));
    }

    #[test]
    fn first_error_wins_and_reports_expected_set() {
        let err = parse("wait 3banana\nwait -1ns").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.expected, vec!["ns", "us", "s"]);
    }

    #[test]
    fn settings_parse_and_validate_keys() {
        let doc = parse("set delta_omega_mhz = 150\nset q_factor = 45.5\n").unwrap();
        assert_eq!(doc.settings.len(), 2);
        assert_eq!(doc.settings["delta_omega_mhz"], 150.0);
        let err = parse("set not_a_knob = 1\n").unwrap_err();
        assert!(err.message.contains("unknown setting"));
        assert_eq!((err.line, err.col), (1, 5));
    }

    #[test]
    fn setting_value_ranges_checked() {
        let err = parse("set q_factor = 0\n").unwrap_err();
        assert!(err.message.contains("q_factor"), "{}", err.message);
        let err = parse("set projection_error = 1.5\n").unwrap_err();
        assert!(err.message.contains("[0, 1]"), "{}", err.message);
    }

    #[test]
    fn unsupported_axis_rejected() {
        let err = parse("pulse y 90deg").unwrap_err();
        assert_eq!(err.expected, vec!["x"]);
    }

    #[test]
    fn truncated_input_points_past_last_token() {
        let err = parse("wait 5.5").unwrap_err();
        assert_eq!((err.line, err.col), (1, 9));
    }

    #[test]
    fn empty_source_is_an_empty_doc() {
        let doc = parse("").unwrap();
        assert!(doc.statements.is_empty() && doc.settings.is_empty());
    }
}

//! Tokenizer: every input either tokenizes fully or yields exactly one
//! positioned error at the first offending character.

use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Number,
    Unit,
    Identifier,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// 1-based line.
    pub line: usize,
    /// 1-based column.
    pub col: usize,
}

const KEYWORDS: &[&str] = &["pulse", "wait", "readout", "measure", "set", "on", "off", "for"];
const UNITS: &[&str] = &["ns", "us", "s", "MHz", "GHz", "deg", "rad"];

pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens: Vec<Token> = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = source.chars().peekable();

    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&d) = chars.peek() {
                if d == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        if c == '=' {
            tokens.push(Token { kind: TokenKind::Punctuation, lexeme: "=".into(), line, col });
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '-' || c == '+' {
            let start_col = col;
            let mut lexeme = String::new();
            if c == '-' || c == '+' {
                lexeme.push(c);
                chars.next();
                col += 1;
                match chars.peek() {
                    Some(d) if d.is_ascii_digit() => {}
                    _ => {
                        return Err(ParseError::new(
                            line,
                            start_col,
                            format!("unexpected character '{c}'"),
                        ))
                    }
                }
            }
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    lexeme.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            if chars.peek() == Some(&'.') {
                lexeme.push('.');
                chars.next();
                col += 1;
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        lexeme.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
            }
            // Engineering exponent, only when it is actually one.
            if let Some(&e) = chars.peek() {
                if e == 'e' || e == 'E' {
                    let mut ahead = chars.clone();
                    ahead.next();
                    let sign = matches!(ahead.peek(), Some('+') | Some('-'));
                    if sign {
                        ahead.next();
                    }
                    if matches!(ahead.peek(), Some(d) if d.is_ascii_digit()) {
                        lexeme.push('e');
                        chars.next();
                        col += 1;
                        if sign {
                            lexeme.push(chars.next().unwrap());
                            col += 1;
                        }
                        while let Some(&d) = chars.peek() {
                            if d.is_ascii_digit() {
                                lexeme.push(d);
                                chars.next();
                                col += 1;
                            } else {
                                break;
                            }
                        }
                    }
                }
            }
            tokens.push(Token { kind: TokenKind::Number, lexeme, line, col: start_col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start_col = col;
            let mut lexeme = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    lexeme.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let kind = if KEYWORDS.contains(&lexeme.as_str()) {
                TokenKind::Keyword
            } else if UNITS.contains(&lexeme.as_str())
                && matches!(tokens.last(), Some(t) if t.kind == TokenKind::Number)
            {
                TokenKind::Unit
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token { kind, lexeme, line, col: start_col });
            continue;
        }
        return Err(ParseError::new(line, col, format!("unexpected character '{c}'")));
    }
    Ok(tokens)
}

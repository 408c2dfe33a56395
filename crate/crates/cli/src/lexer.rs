use phscalc_core::arith::{parse_rational, Rational};

use crate::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `p`, `p/q`, optionally followed by `i`
    Num { value: Rational, imag: bool },
    Sym(char),
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &str = ";,=+-*/^()[]{}<>";

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits the input into tokens. `#` starts a comment that runs to the end
/// of the line. A literal `p/q` is fused into one number except right after
/// `^`, so `w^2/3` keeps its integer exponent.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let after_caret = matches!(out.last(), Some(Token { tok: Tok::Sym('^'), .. }));
        let tok = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if !after_caret && j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            let text: String = chars[i..j].iter().collect();
            let imag = !after_caret && j < chars.len() && chars[j] == 'i' && !chars.get(j + 1).is_some_and(|c| ident_char(*c));
            let value = parse_rational(&text).ok_or_else(|| ParseError::syntax(line, col, format!("bad number {text}")))?;
            let end = if imag { j + 1 } else { j };
            col += end - i;
            i = end;
            Tok::Num { value, imag }
        } else if ident_start(c) {
            let mut j = i;
            while j < chars.len() && ident_char(chars[j]) {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            Tok::Ident(text)
        } else if SYMBOLS.contains(c) {
            i += 1;
            col += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError::syntax(line, col, format!("unexpected character {c:?}")));
        };
        out.push(Token { tok, line: start_line, col: start_col });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

use super::{SourcePosition, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// Lowercase identifier, number, symbolic operator name or quoted atom.
    Name(String),
    /// Identifier starting with an uppercase letter or underscore.
    Var(String),
    Open,
    Close,
    OpenList,
    CloseList,
    Comma,
    Bar,
    /// Statement terminator: a `.` followed by layout or end of input.
    End,
    /// Text of a `/* ... */` block comment, without the delimiters.
    Comment(String),
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: SourcePosition,
    /// The token is immediately followed by `(`, which makes it a functor.
    pub functional: bool,
}

const SYMBOL_OPS: &[&str] = &[
    "::-", "<->", "::", ":-", "->", "\\=", "=", "~", "-", "/", "+", "*", "<", ">",
];

fn is_symbol_char(c: char) -> bool {
    "+-*/\\^<>=~:.?@#&$".contains(c)
}

pub struct Lexer<'a> {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            idx: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.idx + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.idx).copied()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> SourcePosition {
        SourcePosition {
            line: self.line,
            column: self.col,
        }
    }

    fn err(&self, pos: SourcePosition, msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            message: msg.into(),
            pos,
        }
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            let tok = self.next_token()?;
            let done = tok.kind == TokenKind::Eof;
            out.push(tok);
            if done {
                return Ok(out);
            }
        }
    }

    fn skip_layout(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, SyntaxError> {
        self.skip_layout();
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return Ok(Token {
                kind: TokenKind::Eof,
                pos,
                functional: false,
            });
        };
        let kind = if c == '/' && self.peek_at(1) == Some('*') {
            self.bump();
            self.bump();
            let mut text = String::new();
            loop {
                match self.bump() {
                    None => return Err(self.err(pos, "unterminated block comment")),
                    Some('*') if self.peek() == Some('/') => {
                        self.bump();
                        break;
                    }
                    Some(ch) => text.push(ch),
                }
            }
            TokenKind::Comment(text)
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(ch) = self.peek() {
                if ch.is_alphanumeric() || ch == '_' {
                    s.push(ch);
                    self.bump();
                } else {
                    break;
                }
            }
            if c.is_uppercase() || c == '_' {
                TokenKind::Var(s)
            } else {
                TokenKind::Name(s)
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(ch) = self.peek() {
                if ch.is_ascii_digit() {
                    s.push(ch);
                    self.bump();
                } else {
                    break;
                }
            }
            TokenKind::Name(s)
        } else if c == '\'' {
            self.bump();
            let mut s = String::new();
            loop {
                match self.bump() {
                    None => return Err(self.err(pos, "unterminated quoted atom")),
                    Some('\'') if self.peek() == Some('\'') => {
                        self.bump();
                        s.push('\'');
                    }
                    Some('\'') => break,
                    Some('\\') => match self.bump() {
                        Some('n') => s.push('\n'),
                        Some(other) => s.push(other),
                        None => return Err(self.err(pos, "unterminated quoted atom")),
                    },
                    Some(ch) => s.push(ch),
                }
            }
            TokenKind::Name(s)
        } else {
            match c {
                '(' => {
                    self.bump();
                    TokenKind::Open
                }
                ')' => {
                    self.bump();
                    TokenKind::Close
                }
                '[' => {
                    self.bump();
                    TokenKind::OpenList
                }
                ']' => {
                    self.bump();
                    TokenKind::CloseList
                }
                ',' => {
                    self.bump();
                    TokenKind::Comma
                }
                '|' => {
                    self.bump();
                    TokenKind::Bar
                }
                ';' => {
                    self.bump();
                    TokenKind::Name(";".into())
                }
                '.' if self
                    .peek_at(1)
                    .is_none_or(|n| n.is_whitespace() || n == '%') =>
                {
                    self.bump();
                    TokenKind::End
                }
                _ if is_symbol_char(c) => {
                    let mut run = String::new();
                    let mut k = 0;
                    while let Some(ch) = self.peek_at(k) {
                        if is_symbol_char(ch) {
                            run.push(ch);
                            k += 1;
                        } else {
                            break;
                        }
                    }
                    // Longest known operator prefix, so that `->~p` splits into `->` and `~`.
                    let op = SYMBOL_OPS
                        .iter()
                        .filter(|op| run.starts_with(**op))
                        .max_by_key(|op| op.len())
                        .ok_or_else(|| self.err(pos, format!("unknown operator `{run}`")))?;
                    for _ in 0..op.chars().count() {
                        self.bump();
                    }
                    TokenKind::Name((*op).to_string())
                }
                _ => return Err(self.err(pos, format!("unexpected character `{c}`"))),
            }
        };
        let functional =
            matches!(kind, TokenKind::Name(_) | TokenKind::Var(_)) && self.peek() == Some('(');
        Ok(Token {
            kind,
            pos,
            functional,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        Lexer::new(src)
            .tokenize()
            .unwrap()
            .into_iter()
            .map(|t| t.kind)
            .collect()
    }

    #[test]
    fn splits_glued_operators() {
        assert_eq!(
            kinds("a->~b."),
            vec![
                TokenKind::Name("a".into()),
                TokenKind::Name("->".into()),
                TokenKind::Name("~".into()),
                TokenKind::Name("b".into()),
                TokenKind::End,
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn comments_and_functors() {
        let toks = Lexer::new("% line\n/* tex */ p(X)").tokenize().unwrap();
        assert_eq!(toks[0].kind, TokenKind::Comment(" tex ".into()));
        assert!(toks[1].functional);
        assert_eq!(toks[3].kind, TokenKind::Var("X".into()));
        assert_eq!(
            toks[1].pos,
            SourcePosition {
                line: 2,
                column: 11
            }
        );
    }
}

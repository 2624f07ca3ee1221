use super::Formula;
use crate::error::SyntaxError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
    Equiv,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => {
                out.push((start, Token::Not));
                i += 1;
            }
            b'&' => {
                out.push((start, Token::And));
                i += 1;
            }
            b'|' => {
                out.push((start, Token::Or));
                i += 1;
            }
            b'(' => {
                out.push((start, Token::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Token::RParen));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Token::Implies));
                i += 2;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push((start, Token::Equiv));
                i += 3;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let token = match word {
                    "T" => Token::Top,
                    "F" => Token::Bottom,
                    w if w.as_bytes()[0].is_ascii_lowercase() => Token::Ident(w.to_string()),
                    w => {
                        return Err(SyntaxError::new(
                            start + 1,
                            format!("invalid atom `{w}`: atoms start with a lowercase letter"),
                        ))
                    }
                };
                out.push((start, token));
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(SyntaxError::new(
                    start + 1,
                    format!("unexpected character `{ch}`"),
                ));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| p + 1)
            .unwrap_or(self.end + 1)
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn equiv(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.implies()?;
        while self.eat(&Token::Equiv) {
            let right = self.implies()?;
            left = Formula::equiv(left, right);
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.or()?;
        if self.eat(&Token::Implies) {
            let right = self.implies()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.and()?;
        while self.eat(&Token::Or) {
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while self.eat(&Token::And) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let column = self.column();
        let Some(token) = self.peek().cloned() else {
            return Err(SyntaxError::new(column, "unexpected end of formula"));
        };
        self.pos += 1;
        match token {
            Token::Not => Ok(self.unary()?.negate()),
            Token::Top => Ok(Formula::Top),
            Token::Bottom => Ok(Formula::Bottom),
            Token::Ident(name) => Ok(Formula::atom(&name)),
            Token::LParen => {
                let inner = self.equiv()?;
                if !self.eat(&Token::RParen) {
                    return Err(SyntaxError::new(self.column(), "expected `)`"));
                }
                Ok(inner)
            }
            other => Err(SyntaxError::new(
                column,
                format!("unexpected {}", describe(&other)),
            )),
        }
    }
}

fn describe(token: &Token) -> &'static str {
    match token {
        Token::Ident(_) => "atom",
        Token::Top => "`T`",
        Token::Bottom => "`F`",
        Token::Not => "`!`",
        Token::And => "`&`",
        Token::Or => "`|`",
        Token::Implies => "`->`",
        Token::Equiv => "`<->`",
        Token::LParen => "`(`",
        Token::RParen => "`)`",
    }
}

/// Parses the concrete formula syntax.
///
/// Precedence from tightest to loosest is `!`, `&`, `|`, `->`, `<->`. The
/// arrow associates to the right, `&`, `|` and `<->` to the left. `T` and `F`
/// are verum and falsum.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(SyntaxError::new(1, "empty formula"));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = parser.equiv()?;
    if parser.pos < parser.tokens.len() {
        let column = parser.column();
        let what = describe(&parser.tokens[parser.pos].1);
        return Err(SyntaxError::new(
            column,
            format!("unexpected {what} after formula"),
        ));
    }
    Ok(f)
}

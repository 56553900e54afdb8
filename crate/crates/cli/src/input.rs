//! List input: decimal integers separated by whitespace, commas or newlines.
//! Lines whose first non-blank character is `#` are comments.

use std::path::{Path, PathBuf};

use cayley_imc::word_mask;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: malformed token {token:?}")]
    Malformed {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}, column {column}: value {value} does not fit in {word_size} bits")]
    OutOfRange {
        line: usize,
        column: usize,
        value: u64,
        word_size: u32,
    },
    #[error("line {line}, column {column}: value {token} does not fit in {word_size} bits")]
    TooLarge {
        line: usize,
        column: usize,
        token: String,
        word_size: u32,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Where the list comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Path(PathBuf),
    Inline(String),
    /// `len` uniformly random words drawn from the run's seed.
    Random {
        len: usize,
    },
    None,
}

/// Parse a list and check every value against `[0, 2^word_size)`.
pub fn parse_input(text: &str, word_size: u32) -> Result<Vec<u64>, InputError> {
    let limit = word_mask(word_size);
    let mut out = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut rest = line;
        let mut offset = 0;
        while !rest.is_empty() {
            let skip = rest
                .find(|c: char| !(c.is_whitespace() || c == ','))
                .unwrap_or(rest.len());
            offset += skip;
            rest = &rest[skip..];
            if rest.is_empty() {
                break;
            }
            let end = rest
                .find(|c: char| c.is_whitespace() || c == ',')
                .unwrap_or(rest.len());
            let token = &rest[..end];
            let line = line_idx + 1;
            let column = offset + 1;
            let value = match token.parse::<u64>() {
                Ok(v) if token.bytes().all(|b| b.is_ascii_digit()) => v,
                Err(_) if token.bytes().all(|b| b.is_ascii_digit()) => {
                    return Err(InputError::TooLarge {
                        line,
                        column,
                        token: token.to_string(),
                        word_size,
                    });
                }
                _ => {
                    return Err(InputError::Malformed {
                        line,
                        column,
                        token: token.to_string(),
                    })
                }
            };
            if value > limit {
                return Err(InputError::OutOfRange {
                    line,
                    column,
                    value,
                    word_size,
                });
            }
            out.push(value);
            offset += end;
            rest = &rest[end..];
        }
    }
    Ok(out)
}

pub fn read_input(path: &Path, word_size: u32) -> Result<Vec<u64>, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_input(&text, word_size)
}

pub fn random_list(len: usize, word_size: u32, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = word_mask(word_size);
    (0..len).map(|_| rng.random::<u64>() & mask).collect()
}

impl Source {
    pub fn load(&self, word_size: u32, seed: u64) -> Result<Vec<u64>, InputError> {
        match self {
            Source::Path(p) => read_input(p, word_size),
            Source::Inline(text) => parse_input(text, word_size),
            Source::Random { len } => Ok(random_list(*len, word_size, seed)),
            Source::None => Ok(Vec::new()),
        }
    }
}

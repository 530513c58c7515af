//! Alphabets and symbol coding.
//!
//! Every symbol maps to a dense code in `0..len()`. Codes are packed at
//! `bits_per_symbol` bits each, so a 16-bit word holds
//! `symbols_per_group16` symbols: 8 for DNA, 3 for the 20-letter protein
//! alphabet (with the top bit unused).

use std::fmt;

use crate::error::EncodingError;

const INVALID: u8 = u8::MAX;

pub const DNA_SYMBOLS: &[u8] = b"ACGT";
pub const PROTEIN_SYMBOLS: &[u8] = b"ACDEFGHIKLMNPQRSTVWY";

#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    codes: [u8; 256],
    bits_per_symbol: u32,
    symbols_per_group16: usize,
}

impl Alphabet {
    /// Builds an alphabet from an ordered list of distinct byte symbols.
    ///
    /// Letters are matched case-insensitively unless both cases are
    /// themselves distinct symbols of the alphabet.
    pub fn new(symbols: &[u8]) -> Result<Self, EncodingError> {
        if symbols.len() < 2 || symbols.len() > 255 {
            return Err(EncodingError::AlphabetSize(symbols.len()));
        }
        let mut codes = [INVALID; 256];
        for (code, &sym) in symbols.iter().enumerate() {
            if codes[sym as usize] != INVALID {
                return Err(EncodingError::DuplicateSymbol(sym as char));
            }
            codes[sym as usize] = code as u8;
        }
        for &sym in symbols {
            let other = if sym.is_ascii_uppercase() {
                sym.to_ascii_lowercase()
            } else {
                sym.to_ascii_uppercase()
            };
            if other != sym && codes[other as usize] == INVALID {
                codes[other as usize] = codes[sym as usize];
            }
        }
        let bits_per_symbol = usize::BITS - (symbols.len() - 1).leading_zeros();
        Ok(Alphabet {
            symbols: symbols.to_vec(),
            codes,
            bits_per_symbol,
            symbols_per_group16: 16 / bits_per_symbol as usize,
        })
    }

    pub fn dna() -> Self {
        Self::new(DNA_SYMBOLS).expect("DNA alphabet is valid")
    }

    pub fn protein() -> Self {
        Self::new(PROTEIN_SYMBOLS).expect("protein alphabet is valid")
    }

    /// Parses `dna`, `protein` or `custom:<symbols>`.
    pub fn parse(spec: &str) -> Result<Self, EncodingError> {
        match spec.to_ascii_lowercase().as_str() {
            "dna" => Ok(Self::dna()),
            "protein" => Ok(Self::protein()),
            _ => match spec.split_once(':') {
                Some((kind, symbols)) if kind.eq_ignore_ascii_case("custom") => {
                    Self::new(symbols.as_bytes())
                }
                _ => Err(EncodingError::UnknownAlphabet(spec.to_string())),
            },
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    #[inline]
    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    #[inline]
    pub fn symbols_per_group16(&self) -> usize {
        self.symbols_per_group16
    }

    #[inline]
    pub fn code(&self, symbol: u8) -> Option<u8> {
        match self.codes[symbol as usize] {
            INVALID => None,
            c => Some(c),
        }
    }

    #[inline]
    pub fn symbol(&self, code: u8) -> u8 {
        self.symbols[code as usize]
    }

    /// Encodes one sequence. `sequence` is only used to label errors.
    pub fn encode(&self, text: &[u8], sequence: usize) -> Result<Vec<u8>, EncodingError> {
        text.iter()
            .enumerate()
            .map(|(position, &b)| {
                self.code(b).ok_or(EncodingError::InvalidSymbol {
                    symbol: b as char,
                    sequence,
                    position,
                })
            })
            .collect()
    }

    pub fn decode(&self, codes: &[u8]) -> Vec<u8> {
        codes.iter().map(|&c| self.symbol(c)).collect()
    }

    pub fn decode_string(&self, codes: &[u8]) -> String {
        String::from_utf8_lossy(&self.decode(codes)).into_owned()
    }

    /// Short name used in reports and instance headers.
    pub fn name(&self) -> String {
        if self.symbols == DNA_SYMBOLS {
            "dna".to_string()
        } else if self.symbols == PROTEIN_SYMBOLS {
            "protein".to_string()
        } else {
            format!("custom:{}", String::from_utf8_lossy(&self.symbols))
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Alphabet")
            .field("symbols", &String::from_utf8_lossy(&self.symbols))
            .field("bits_per_symbol", &self.bits_per_symbol)
            .finish()
    }
}

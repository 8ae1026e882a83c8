//! The DNA alphabet and its 2-bit codes.

use core::fmt;

/// One of `A`, `C`, `G`, `T`, coded 0..=3 in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Symbol {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::A, Symbol::C, Symbol::G, Symbol::T];

    #[inline]
    pub const fn code(self) -> u8 {
        self as u8
    }

    /// Decodes the low two bits of `code`.
    #[inline]
    pub const fn from_code(code: u8) -> Symbol {
        match code & 3 {
            0 => Symbol::A,
            1 => Symbol::C,
            2 => Symbol::G,
            _ => Symbol::T,
        }
    }

    /// Case-insensitive ASCII decode. Anything outside `ACGTacgt` is `None`.
    #[inline]
    pub const fn from_ascii(byte: u8) -> Option<Symbol> {
        match byte {
            b'A' | b'a' => Some(Symbol::A),
            b'C' | b'c' => Some(Symbol::C),
            b'G' | b'g' => Some(Symbol::G),
            b'T' | b't' => Some(Symbol::T),
            _ => None,
        }
    }

    #[inline]
    pub const fn to_ascii(self) -> u8 {
        match self {
            Symbol::A => b'A',
            Symbol::C => b'C',
            Symbol::G => b'G',
            Symbol::T => b'T',
        }
    }

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii() as char)
    }
}

/// A BWT position holds either a symbol or the `$` terminator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BwtChar {
    Sentinel,
    Symbol(Symbol),
}

impl BwtChar {
    pub const fn to_ascii(self) -> u8 {
        match self {
            BwtChar::Sentinel => b'$',
            BwtChar::Symbol(s) => s.to_ascii(),
        }
    }
}

impl fmt::Display for BwtChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii() as char)
    }
}

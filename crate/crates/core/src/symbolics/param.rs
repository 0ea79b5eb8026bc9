use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamKind {
    /// A doubled representation parameter `2l^I_a`.
    Ell,
    U,
    V,
    Aux,
}

/// A named symbol. Ordering is lexicographic in `(kind, site, pos)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param {
    pub kind: ParamKind,
    pub site: u32,
    pub pos: u32,
}

impl Param {
    /// The symbol `2l^site_pos`.
    pub const fn ell(site: u32, pos: u32) -> Param {
        Param { kind: ParamKind::Ell, site, pos }
    }

    pub const fn u() -> Param {
        Param { kind: ParamKind::U, site: 0, pos: 0 }
    }

    pub const fn v() -> Param {
        Param { kind: ParamKind::V, site: 0, pos: 0 }
    }

    pub const fn aux(index: u32) -> Param {
        Param { kind: ParamKind::Aux, site: index, pos: 0 }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ParamKind::Ell => write!(f, "2l{}_{}", self.site, self.pos),
            ParamKind::U => write!(f, "u"),
            ParamKind::V => write!(f, "v"),
            ParamKind::Aux => write!(f, "t{}", self.site),
        }
    }
}

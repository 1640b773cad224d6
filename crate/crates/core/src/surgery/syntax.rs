//! Text syntax for surgery words.
//!
//! ```text
//! word     := base step*
//! base     := "S(" n ")" | "M1free" | "N2free(" n ")" | "N1[1](" n ")" | "Poly(" n "," n ")"
//! step     := "+R(" n ")" | "-R" | "+TR(" sel ")" | "-TR" | "+FMB(" sel ")" | "+MBF"
//!           | "#M(" n ")" | "#N(" n ")"
//! sel      := "base-north" | "base-south" | "ribbon-north:" n | "ribbon-south:" n
//!           | "twist-a:" n | "twist-b:" n | "poly-vertex:" n | "at:" n
//! ```
//!
//! Tokens may be separated by whitespace.

use crate::error::{Error, Result};
use crate::invariant::OddPrime;

use super::ops::Summand;
use super::word::{BaseSpace, Selector, SurgeryStep, SurgeryWord};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(format!("expected {lit:?}")))
        }
    }

    fn number(&mut self) -> Result<u32> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected a number"));
        }
        let text = &self.rest()[..digits];
        let n = text.parse().map_err(|_| self.err(format!("number {text} out of range")))?;
        self.pos += digits;
        Ok(n)
    }

    fn parenthesized(&mut self) -> Result<u32> {
        self.expect("(")?;
        let n = self.number()?;
        self.expect(")")?;
        Ok(n)
    }

    fn base(&mut self) -> Result<BaseSpace> {
        if self.eat("S") {
            Ok(BaseSpace::Sphere(self.parenthesized()?))
        } else if self.eat("M1free") {
            Ok(BaseSpace::M1Free)
        } else if self.eat("N2free") {
            Ok(BaseSpace::KleinFree(self.parenthesized()?))
        } else if self.eat("N1[1]") {
            Ok(BaseSpace::ProjPlaneOne(self.parenthesized()?))
        } else if self.eat("Poly") {
            self.expect("(")?;
            let n = self.number()?;
            self.expect(",")?;
            self.skip_ws();
            let i = self.number()?;
            self.expect(")")?;
            Ok(BaseSpace::Poly { n, i })
        } else {
            Err(self.err("expected a base space: S(i), M1free, N2free(i), N1[1](i) or Poly(n,i)"))
        }
    }

    fn selector(&mut self) -> Result<Selector> {
        self.expect("(")?;
        let sel = if self.eat("base-north") {
            Selector::BaseNorth
        } else if self.eat("base-south") {
            Selector::BaseSouth
        } else {
            let table: [(&str, fn(u32) -> Selector); 6] = [
                ("ribbon-north:", Selector::RibbonNorth),
                ("ribbon-south:", Selector::RibbonSouth),
                ("twist-a:", Selector::TwistA),
                ("twist-b:", Selector::TwistB),
                ("poly-vertex:", Selector::PolyVertex),
                ("at:", Selector::At),
            ];
            let mut found = None;
            for (lit, make) in table {
                if self.eat(lit) {
                    found = Some(make(self.number()?));
                    break;
                }
            }
            found.ok_or_else(|| self.err("expected a fixed-point selector"))?
        };
        self.expect(")")?;
        Ok(sel)
    }

    fn step(&mut self) -> Result<SurgeryStep> {
        if self.eat("+R(") {
            self.pos -= 1;
            Ok(SurgeryStep::PlusRibbon(self.parenthesized()?))
        } else if self.eat("+TR") {
            Ok(SurgeryStep::PlusTwisted(self.selector()?))
        } else if self.eat("+FMB") {
            Ok(SurgeryStep::PlusFmb(self.selector()?))
        } else if self.eat("+MBF") {
            Ok(SurgeryStep::PlusMbf)
        } else if self.eat("-TR") {
            Ok(SurgeryStep::MinusTwisted)
        } else if self.eat("-R") {
            Ok(SurgeryStep::MinusRibbon)
        } else if self.eat("#M") {
            Ok(SurgeryStep::ConnSum(Summand::Orientable(self.parenthesized()?)))
        } else if self.eat("#N") {
            Ok(SurgeryStep::ConnSum(Summand::NonOrientable(self.parenthesized()?)))
        } else {
            Err(self.err("expected a surgery step"))
        }
    }
}

pub fn parse(src: &str, p: OddPrime) -> Result<SurgeryWord> {
    let mut c = Cursor { src, pos: 0 };
    c.skip_ws();
    let base = c.base()?;
    let mut steps = Vec::new();
    loop {
        c.skip_ws();
        if c.rest().is_empty() {
            break;
        }
        steps.push(c.step()?);
    }
    Ok(SurgeryWord { p, base, steps })
}

fn print_selector(sel: &Selector) -> String {
    match sel {
        Selector::BaseNorth => "base-north".into(),
        Selector::BaseSouth => "base-south".into(),
        Selector::RibbonNorth(j) => format!("ribbon-north:{j}"),
        Selector::RibbonSouth(j) => format!("ribbon-south:{j}"),
        Selector::TwistA(j) => format!("twist-a:{j}"),
        Selector::TwistB(j) => format!("twist-b:{j}"),
        Selector::PolyVertex(j) => format!("poly-vertex:{j}"),
        Selector::At(k) => format!("at:{k}"),
    }
}

pub fn print_step(step: &SurgeryStep) -> String {
    match step {
        SurgeryStep::ConnSum(Summand::Orientable(g)) => format!("#M({g})"),
        SurgeryStep::ConnSum(Summand::NonOrientable(r)) => format!("#N({r})"),
        SurgeryStep::PlusRibbon(i) => format!("+R({i})"),
        SurgeryStep::MinusRibbon => "-R".into(),
        SurgeryStep::PlusTwisted(sel) => format!("+TR({})", print_selector(sel)),
        SurgeryStep::MinusTwisted => "-TR".into(),
        SurgeryStep::PlusFmb(sel) => format!("+FMB({})", print_selector(sel)),
        SurgeryStep::PlusMbf => "+MBF".into(),
    }
}

pub fn print(word: &SurgeryWord) -> String {
    let mut out = match word.base {
        BaseSpace::M1Free => "M1free".to_string(),
        BaseSpace::Sphere(i) => format!("S({i})"),
        BaseSpace::KleinFree(i) => format!("N2free({i})"),
        BaseSpace::ProjPlaneOne(i) => format!("N1[1]({i})"),
        BaseSpace::Poly { n, i } => format!("Poly({n},{i})"),
    };
    for step in &word.steps {
        out.push(' ');
        out.push_str(&print_step(step));
    }
    out
}

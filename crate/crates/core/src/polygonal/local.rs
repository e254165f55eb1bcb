//! Local pictures: what each construction does over a single base point.

use std::fmt;

use super::{flip_pairs, SheetLayout};
use crate::cover::GluedTower;
use crate::error::Result;
use crate::weyl::SignedPerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Bigonal,
    Trigonal,
    Tetragonal,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Bigonal => "bigonal",
            Construction::Trigonal => "trigonal",
            Construction::Tetragonal => "tetragonal",
        })
    }
}

/// The case of the local list an input falls under, with input and outputs
/// described as `cycle type / branched points [glued]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPictureTag {
    pub construction: Construction,
    pub case: String,
    pub input: String,
    pub outputs: Vec<String>,
}

impl fmt::Display for LocalPictureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {} -> {}", self.construction, self.case, self.input, self.outputs.join(" | "))
    }
}

fn cycle_type(g: &SignedPerm) -> Vec<usize> {
    g.sigma().cycle_type()
}

fn branched(g: &SignedPerm) -> usize {
    g.sigma().cycles().iter().filter(|c| g.cycle_sign(c) == 1).count()
}

/// `cycle type / branched points [glued]` of a local element.
pub fn describe_signed(g: &SignedPerm, glued: bool) -> String {
    let ty: Vec<String> = cycle_type(g).iter().map(usize::to_string).collect();
    format!("{}/{}{}", ty.join("+"), branched(g), if glued { " glued" } else { "" })
}

/// The cycle type of a local element of a cover, as `a+b+...`.
pub fn describe_cycle_type(p: &crate::perm::Perm) -> String {
    let ty: Vec<String> = p.cycle_type().iter().map(usize::to_string).collect();
    ty.join("+")
}

/// Classifies the local element `g` of a tower, `glued` marking a node
/// joining its two branched points.
pub fn local_picture(construction: Construction, g: &SignedPerm, glued: bool) -> Result<LocalPictureTag> {
    let input = describe_signed(g, glued);
    let ty = cycle_type(g);
    let r = branched(g);
    let (case, outputs) = match construction {
        Construction::Bigonal => {
            let out = SheetLayout::new(vec![0, 3, 1, 2]).signed(g)?;
            let double_flip = out.sigma().is_identity() && out.eps() == 0b11;
            let case = match (g.sigma().is_identity(), g.eps().count_ones()) {
                (true, 0) => "i",
                (true, 1) => "ii",
                (false, 0) | (false, 2) => "iii",
                (false, _) => "iv",
                (true, _) if glued => "vi",
                (true, _) => "v",
            };
            (case.to_string(), vec![describe_signed(&out, double_flip && !glued)])
        }
        Construction::Trigonal => {
            let x = SheetLayout::new(vec![0b000, 0b011, 0b101, 0b110]).perm(g)?;
            let case = match x.cycle_type().as_slice() {
                [1, 1, 1, 1] => "i",
                [2, 1, 1] => "ii",
                [3, 1] => "iii",
                [2, 2] => "iv",
                _ => "v",
            };
            (case.to_string(), vec![describe_cycle_type(&x)])
        }
        Construction::Tetragonal => {
            let mut outputs = Vec::new();
            for parity in 0..2u32 {
                let block = (0u64..16).filter(|t| t.count_ones() % 2 == parity);
                let out = SheetLayout::new(flip_pairs(4, block)).signed(g)?;
                outputs.push(describe_signed(&out, branched(&out) == 2));
            }
            let fixed_branched = g.sigma().cycles().iter().filter(|c| c.len() == 1 && g.cycle_sign(c) == 1).count();
            let case = match (ty.as_slice(), r, glued) {
                ([1, 1, 1, 1], 0, false) => "1",
                ([2, 1, 1], 0, false) => "2",
                ([2, 2], 0, false) => "3",
                ([1, 1, 1, 1], 2, true) => "4",
                ([2, 1, 1], 2, true) if fixed_branched == 2 => "5",
                ([3, 1], 0, false) => "6",
                ([4], 0, false) => "7",
                _ => "generic",
            };
            (case.to_string(), outputs)
        }
    };
    Ok(LocalPictureTag { construction, case, input, outputs })
}

/// The tag of every branch label of a tower.
pub fn local_tags(construction: Construction, t: &GluedTower) -> Result<Vec<LocalPictureTag>> {
    t.tower()
        .branches()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let glued = t.nodes().iter().any(|(a, b)| a.label == k && b.label == k);
            local_picture(construction, g, glued)
        })
        .collect()
}

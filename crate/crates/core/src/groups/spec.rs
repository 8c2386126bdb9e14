//! JSON group specifications: `{"kind": "cyclic", "n": 4}` and friends.

use serde::{Deserialize, Serialize};

use super::{abelian, cyclic, dihedral, direct_product, wreath_product, FiniteGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Abelian { factors: Vec<u64> },
    Dihedral { n: usize },
    Direct { a: Box<GroupSpec>, b: Box<GroupSpec> },
    Wreath { h: Box<GroupSpec>, g: Box<GroupSpec> },
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self, size_cap: usize) -> Result<FiniteGroup, GroupError> {
        let group = match self {
            GroupSpec::Cyclic { n } => {
                if *n == 0 {
                    return Err(GroupError::InvalidParameter("cyclic order must be ≥ 1".into()));
                }
                cyclic(*n)
            }
            GroupSpec::Abelian { factors } => abelian(factors)?,
            GroupSpec::Dihedral { n } => dihedral(*n)?,
            GroupSpec::Direct { a, b } => direct_product(&a.build(size_cap)?, &b.build(size_cap)?).group,
            GroupSpec::Wreath { h, g } => wreath_product(&h.build(size_cap)?, &g.build(size_cap)?, size_cap)?.total,
            GroupSpec::Table { table } => FiniteGroup::from_table(table.clone(), None, false)?,
        };
        if group.order() > size_cap {
            return Err(GroupError::SizeCap { order: group.order(), cap: size_cap });
        }
        Ok(group)
    }
}

use crate::error::{Error, Result};
use crate::semiring::{Element, Semiring, SemiringOps};
use crate::tree::{Tree, TreeHomomorphism};

use super::Dta;

/// A recognizable step function Σ l_i · χ_{L_i}.
#[derive(Clone, Debug)]
pub struct StepFunction {
    semiring: Semiring,
    cells: Vec<(Dta, Element)>,
    partition: bool,
}

impl StepFunction {
    pub fn new(semiring: Semiring, cells: Vec<(Dta, Element)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Precondition(
                "a step function needs at least one cell".into(),
            ));
        }
        let alphabet = cells[0].0.alphabet().clone();
        for (d, l) in &cells {
            semiring.check_element(l)?;
            if !d.alphabet().same_symbols(&alphabet) {
                return Err(Error::AlphabetMismatch(
                    "cells over different alphabets".into(),
                ));
            }
        }
        Ok(StepFunction {
            semiring,
            cells,
            partition: false,
        })
    }

    pub fn cells(&self) -> &[(Dta, Element)] {
        &self.cells
    }

    pub fn is_partition(&self) -> bool {
        self.partition
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn eval(&self, t: &Tree) -> Result<Element> {
        let mut acc = self.semiring.zero();
        for (d, l) in &self.cells {
            if d.accepts(t)? {
                acc = self.semiring.add(&acc, l);
            }
        }
        Ok(acc)
    }

    /// An equal step function whose cells partition all trees: one cell
    /// per reachable acceptance pattern of the input cells, weighted by the
    /// sum of the accepting cells' weights. Cells of weight zero are kept so
    /// the cover stays complete.
    pub fn partition(&self) -> Result<StepFunction> {
        let dtas: Vec<Dta> = self.cells.iter().map(|(d, _)| d.clone()).collect();
        let (product, comps) = Dta::product(&dtas)?;
        let signature = |c: &Vec<usize>| -> Vec<bool> {
            c.iter()
                .enumerate()
                .map(|(k, &s)| dtas[k].accepting()[s])
                .collect()
        };
        let mut classes: Vec<Vec<bool>> = comps.iter().map(signature).collect();
        classes.sort_by(|a, b| b.cmp(a));
        classes.dedup();
        let sr = &self.semiring;
        let mut cells = Vec::with_capacity(classes.len());
        for class in classes {
            let accepting = comps.iter().map(|c| signature(c) == class).collect();
            let weight = class
                .iter()
                .zip(&self.cells)
                .filter(|(&on, _)| on)
                .fold(sr.zero(), |acc, (_, (_, l))| sr.add(&acc, l));
            cells.push((product.with_accepting(accepting)?, weight));
        }
        Ok(StepFunction {
            semiring: sr.clone(),
            cells,
            partition: true,
        })
    }

    /// The step function t ↦ self(h(t)), obtained cell by cell through
    /// inverse homomorphic images of the cell languages.
    pub fn compose_hom(&self, h: &TreeHomomorphism) -> Result<StepFunction> {
        if !self.partition {
            return Err(Error::Precondition(
                "composition with a homomorphism needs a partition step function".into(),
            ));
        }
        let cells = self
            .cells
            .iter()
            .map(|(d, l)| Ok((d.inverse_hom(h)?, l.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(StepFunction {
            semiring: self.semiring.clone(),
            cells,
            partition: true,
        })
    }
}

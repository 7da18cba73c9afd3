use crate::allocator::BeamCodebook;
use crate::antenna::{AntennaConfig, SteeringDirection};
use crate::error::Result;
use crate::geometry::{BaseStationSite, LinkTable, Position3D};

/// Fixed deployment: sites, waypoints, precomputed link angles and the
/// array/codebook every site uses.
#[derive(Debug, Clone)]
pub struct Scene {
    pub bss: Vec<BaseStationSite>,
    pub uavs: Vec<Position3D>,
    pub links: LinkTable,
    pub antenna: AntennaConfig,
    pub codebook: BeamCodebook,
}

impl Scene {
    pub fn new(
        bss: Vec<BaseStationSite>,
        uavs: Vec<Position3D>,
        antenna: AntennaConfig,
        codebook: BeamCodebook,
    ) -> Result<Self> {
        let links = LinkTable::build(&uavs, &bss)?;
        Ok(Self {
            bss,
            uavs,
            links,
            antenna,
            codebook,
        })
    }

    pub fn m(&self) -> usize {
        self.uavs.len()
    }

    pub fn l(&self) -> usize {
        self.bss.len()
    }

    pub fn n(&self) -> usize {
        self.codebook.n_beams
    }

    pub fn direction(&self, m: usize, l: usize) -> SteeringDirection {
        self.links.get(m, l).into()
    }
}

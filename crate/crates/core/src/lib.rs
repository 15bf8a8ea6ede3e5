pub mod exactlin;
pub mod ring3;
pub mod syzygy;
pub mod singcat;
pub mod curvecat;
pub mod logbundle;
pub mod torelli;
pub mod report;

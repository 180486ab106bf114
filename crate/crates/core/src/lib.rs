pub mod ffield;
pub mod permgrp;
pub mod fgroup;
pub mod linkgraph;
pub mod tripres;
pub mod singer;
pub mod oppmodel;
pub mod exoticity;
pub mod grouptools;
pub mod document;
pub mod tables;

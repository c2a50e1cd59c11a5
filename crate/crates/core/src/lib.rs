pub mod creal;
pub mod exactnum;
pub mod tower;
pub mod hoprims;
pub mod stdlib;
pub mod lang;

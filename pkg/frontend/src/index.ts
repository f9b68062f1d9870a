export * from "./skgf.js";
export * from "./csv.js";
export * from "./plots.js";
export { KINDS, main, parseArgs, render } from "./cli.js";

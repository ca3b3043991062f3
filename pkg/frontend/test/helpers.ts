import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

export const FIXTURES = fileURLToPath(new URL("./fixtures/", import.meta.url));

export function fixturePath(name: string): string {
  return path.join(FIXTURES, name);
}

export function readFixture(name: string): string {
  return fs.readFileSync(fixturePath(name), "utf8");
}

export const SWEEP_PROFILES = [
  { file: "burgers-sine-a25a9d87a7_profile.csv", label: "eps=4e-3" },
  { file: "burgers-sine-08ff8689b2_profile.csv", label: "eps=2e-3" },
  { file: "burgers-sine-7469ca45ed_profile.csv", label: "eps=1e-3" },
] as const;

export const HEADLINE_SERIES = "burgers-sine-7f41b993ff.csv";
export const HEADLINE_PROFILE = "burgers-sine-7f41b993ff_profile.csv";
export const HEADLINE_TRANSFORMED = "burgers-sine-7f41b993ff_transformed.csv";
export const TORUS_SERIES = "torus-diagonal-e55df6cd51.csv";
export const SCALING = "headline_scaling.csv";
export const EMPTY_SERIES = "empty-series.csv";

export function countMatches(haystack: string, needle: string): number {
  let count = 0;
  let at = haystack.indexOf(needle);
  while (at !== -1) {
    count += 1;
    at = haystack.indexOf(needle, at + needle.length);
  }
  return count;
}

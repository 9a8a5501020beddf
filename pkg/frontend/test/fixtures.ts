import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { ServerFrame } from "../src/protocol";

const here = dirname(fileURLToPath(import.meta.url));

export function loadFrames(name: string): ServerFrame[] {
  const raw = readFileSync(join(here, "fixtures", `${name}.jsonl`), "utf-8");
  return raw
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as ServerFrame);
}

export const FIXTURES = {
  digital: ["digital20_seat0", "digital20_seat1"],
  physical: ["physical3_seat0", "physical3_seat1"],
} as const;

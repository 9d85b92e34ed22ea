import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    // the scripted-session suite boots a real labeling server
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});

import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globalSetup: ["./test/global_setup.ts"],
    testTimeout: 30_000,
    hookTimeout: 60_000,
    // the engine server is shared state; run files one at a time
    fileParallelism: false,
  },
});

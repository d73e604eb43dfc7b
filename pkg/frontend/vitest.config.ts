import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the scripted session test boots the Python service and waits on jobs
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});

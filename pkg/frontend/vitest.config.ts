import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["test/**/*.test.ts"],
    // tests drive a live service process, so network round trips are normal
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
